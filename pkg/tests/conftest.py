import pytest

from metaphornet.converters import convert_mohx, convert_trofi
from metaphornet.synthcorpus import write_mohx_style_corpus, write_trofi_style_corpus


@pytest.fixture(scope="session")
def trofi_raw_path(tmp_path_factory):
    return write_trofi_style_corpus(tmp_path_factory.mktemp("raw") / "trofi_style.txt")


@pytest.fixture(scope="session")
def mohx_raw_path(tmp_path_factory):
    return write_mohx_style_corpus(tmp_path_factory.mktemp("raw") / "mohx_style.csv")


@pytest.fixture(scope="session")
def trofi_dataset(trofi_raw_path):
    return convert_trofi(trofi_raw_path).dataset


@pytest.fixture(scope="session")
def mohx_dataset(mohx_raw_path):
    return convert_mohx(mohx_raw_path).dataset
