"""Deterministic stand-in corpora in the native raw layouts.

The real benchmark distributions cannot ship with this package, so these
builders write files that match their layouts and headline statistics:

* TroFi style: 50 verbs, 3,737 labeled sentences at 43% metaphor, with a
  mix of verb-level label skews chosen so the majority-per-verb rule lands
  near its published accuracy; a few unannotated clusters exercise the
  converter's drop path.
* MOH-X style: 214 verbs over 647 short sentences at 49% metaphor, with
  the tiny per-verb counts (2-4 uses, both senses common) that make the
  majority rule behave the way it does on the real data.

Target verbs appear in base form so the distinct-token-at-verb-index count
equals the verb inventory. Everything is seeded; identical inputs produce
identical bytes.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .data import Dataset, Example

_VERB_POOL = (
    "absorb assault attack besiege cool dance destroy die dissolve drag "
    "drink drown eat escape evaporate examine fill fix flood flourish "
    "flow fly grab grasp kick kill knock lend melt miss "
    "pass plant play plow pour pump rest ride rip roll "
    "sleep smooth step stick strike stumble target touch vaporize wither "
    "abandon accelerate attach bake balance bend bite bloom blossom boil "
    "bounce breathe brew bristle bruise brush build burn burst bury "
    "buzz carve catch charge chase chew chill choke chop circle "
    "clap clean clear climb cling collapse collect crack crash crawl "
    "cross crush cultivate cut dig dive dodge drain draw drift "
    "drip drive drop dust echo embrace erupt explode fade fall "
    "feed fence ferment fish flatten flicker float fold forge freeze "
    "gallop glow grind grip grow hammer hang harvest hatch haul "
    "heal heat herd hide hit hold howl hunt hurl ignite "
    "inflate inhale iron jump kindle knead land lash launch leak "
    "lean leap lift light march mask measure mend mirror mold "
    "mow nail navigate nibble paddle paint paste patrol peel pierce "
    "pinch pluck polish pounce press prune punch push rake rattle "
    "reap rescue rinse ripen roar roast rub rumble sail scatter "
    "scoop scrape scratch scrub seal shake sharpen shatter shave shine "
    "shiver shovel shred shrink sift simmer sink skate sketch slice "
    "slide smash soak soar spark spill spin splash split spray "
    "sprint sprout squeeze stab stack stir stitch stretch stroll sweep"
).split()

_FILLERS = (
    "the a an his her their our its my your this that these those some many few every "
    "recent early late big small old young new long short dark bright quiet loud heavy "
    "gentle steady sudden careful eager anxious curious famous modest narrow broad "
    "distant nearby foreign local man woman child student teacher doctor farmer worker "
    "writer singer leader lawyer banker trader editor mayor poet nurse pilot judge "
    "crowd family company market office village city street road river valley meadow "
    "garden forest harbor island castle tower window door table chair bottle basket "
    "letter paper report story poem song meeting morning evening winter summer autumn "
    "money profit price debt deal plan idea question answer reason moment minute hour "
    "week month year again often rarely slowly quickly quietly loudly gently firmly "
    "nearly almost really finally usually suddenly carefully of in on at by with from "
    "into over under across along around before after during against toward through "
    "and but or while when because although however perhaps maybe despite"
).split()

TROFI_VERBS = tuple(_VERB_POOL[:50])
MOHX_VERBS = tuple(_VERB_POOL[:214])

_SUFFIXES = ("", "s", "es", "ed", "d", "ing", "n")


def _is_form_of(token: str, verb: str) -> bool:
    stems = [verb]
    if verb.endswith("e"):
        stems.append(verb[:-1])
    stems.append(verb + verb[-1])
    return any(token.startswith(s) and token[len(s):] in _SUFFIXES for s in stems)


def _sentence(rng: np.random.Generator, verb: str, min_len: int, max_len: int) -> list[str]:
    """Filler words around the base-form target verb, period-terminated."""
    pool = [w for w in _FILLERS if not _is_form_of(w, verb)]
    length = int(rng.integers(min_len, max_len + 1))
    position = int(rng.integers(1, length - 1))
    tokens = [pool[i] for i in rng.integers(0, len(pool), size=length)]
    tokens[position] = verb
    tokens[-1] = "."
    return tokens


def _trofi_layout(seed: int) -> str:
    """3,737 sentences over 50 verbs, 1,607 metaphorical (43.0%)."""
    rng = np.random.default_rng(seed)
    sizes = [75] * 37 + [74] * 13
    rates = [0.8] * 14 + [0.2] * 26 + [0.5] * 10
    met = [round(r * s) for r, s in zip(rates, sizes)]
    delta = 1607 - sum(met)
    i = 40
    while delta != 0:
        met[i] += 1 if delta > 0 else -1
        delta += -1 if delta > 0 else 1
        i = 40 + (i - 39) % 10
    serial = 0
    lines: list[str] = []
    for v, (verb, size, n_met) in enumerate(zip(TROFI_VERBS, sizes, met)):
        lines.append(f"***{verb}***")
        lines.append("")
        for kind, tag, n in (("nonliteral", "N", n_met), ("literal", "L", size - n_met)):
            lines.append(f"*{kind} cluster*")
            for _ in range(n):
                sent = " ".join(_sentence(rng, verb, 8, 30))
                lines.append(f"wsj{int(rng.integers(0, 100)):02d}:{serial:05d}\t{tag}\t{sent}")
                serial += 1
            lines.append("")
        if v % 5 == 0:  # every fifth verb also carries an unannotated block
            lines.append("*unannotated cluster*")
            for _ in range(2):
                sent = " ".join(_sentence(rng, verb, 8, 30))
                lines.append(f"wsj{int(rng.integers(0, 100)):02d}:{serial:05d}\tU\t{sent}")
                serial += 1
            lines.append("")
    return "\n".join(lines) + "\n"


# Per-verb (metaphor, literal) use counts: heavy on verbs seen in both
# senses two-to-four times, which is what drags the majority rule below
# chance on this corpus.
_MOHX_KINDS = ((2, 1),) * 98 + ((1, 2),) * 51 + ((3, 0),) * 20 + ((0, 3),) * 40 + ((2, 2),) * 5


def _mohx_layout(seed: int) -> str:
    """647 rows over 214 verbs, 317 metaphorical (49.0%)."""
    rng = np.random.default_rng(seed)
    rows: list[tuple[str, int]] = []
    for verb, (n_met, n_lit) in zip(MOHX_VERBS, _MOHX_KINDS):
        rows.extend((verb, 1) for _ in range(n_met))
        rows.extend((verb, 0) for _ in range(n_lit))
    rows = [rows[i] for i in rng.permutation(len(rows))]
    lines = ["term,sentence,label,verb_idx"]
    for verb, label in rows:
        tokens = _sentence(rng, verb, 5, 12)
        lines.append(f"{verb},{' '.join(tokens)},{label},{tokens.index(verb)}")
    return "\n".join(lines) + "\n"


def write_trofi_style_corpus(path, seed: int = 20) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(_trofi_layout(seed), encoding="utf-8")
    return path


def write_mohx_style_corpus(path, seed: int = 21) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(_mohx_layout(seed), encoding="utf-8")
    return path


def make_synthetic_dataset(
    n_examples: int,
    seed: int = 0,
    min_tokens: int = 4,
    max_tokens: int = 9,
    name: str = "synthetic",
) -> Dataset:
    """Balanced toy dataset (labels alternate) for smoke tests and demos."""
    rng = np.random.default_rng(seed)
    examples = []
    for i in range(n_examples):
        length = int(rng.integers(min_tokens, max_tokens + 1))
        tokens = tuple(_FILLERS[j] for j in rng.integers(0, len(_FILLERS), size=length))
        examples.append(Example(id=f"syn:{i:04d}", tokens=tokens, label=i % 2, source="other"))
    return Dataset(name, tuple(examples))
