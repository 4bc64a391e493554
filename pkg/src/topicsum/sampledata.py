"""Deterministic generator of a small how-to corpus in the article/headline
CSV layout.

Real how-to dumps run to hundreds of thousands of documents; tests, demos,
and the acceptance suite need a corpus with the same shape (multi-topic
articles, short heading-style reference summaries) that fits in memory and
regenerates bit-identically from a seed. Articles mix three themes; each
theme contributes one summary-worthy key sentence plus detail sentences,
and the reference summary is built from the key sentences' wording.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass

from .dataset import ArticlePair, slugify


@dataclass(frozen=True)
class ThemeBank:
    name: str
    verb: str
    nouns: tuple[str, str, str, str]
    details: tuple[str, ...]


THEME_BANKS: tuple[ThemeBank, ...] = (
    ThemeBank("garden", "plant",
              ("soil", "compost", "seedling", "roots"),
              ("mulch", "trowel", "weeds", "sunlight", "fertilizer",
               "drainage", "sprout", "stem", "greenhouse", "bulb",
               "bed", "row")),
    ThemeBank("baking", "knead",
              ("dough", "flour", "yeast", "oven"),
              ("bowl", "whisk", "sugar", "butter", "crust", "loaf",
               "pan", "batter", "icing", "tray", "crumb", "glaze")),
    ThemeBank("bike", "tighten",
              ("chain", "wheel", "spoke", "brake"),
              ("wrench", "pedal", "tire", "valve", "frame", "gear",
               "hub", "bolt", "grease", "saddle", "pump", "rim")),
    ThemeBank("painting", "prime",
              ("wall", "roller", "primer", "paint"),
              ("tape", "tarp", "ladder", "ceiling", "trim", "coat",
               "bucket", "drip", "patch", "sander", "smudge", "canvas")),
    ThemeBank("laundry", "rinse",
              ("detergent", "fabric", "stain", "cycle"),
              ("washer", "dryer", "lint", "hamper", "bleach", "softener",
               "zipper", "collar", "sleeve", "garment", "iron", "wrinkle")),
    ThemeBank("computer", "install",
              ("driver", "software", "keyboard", "monitor"),
              ("cable", "router", "firmware", "desktop", "folder", "backup",
               "password", "screen", "mouse", "browser", "disk", "port")),
    ThemeBank("fitness", "stretch",
              ("muscle", "posture", "workout", "breathing"),
              ("treadmill", "dumbbell", "squat", "lunge", "plank", "cardio",
               "hamstring", "shoulder", "spine", "warmup", "mat", "rep")),
    ThemeBank("cooking", "simmer",
              ("sauce", "garlic", "onion", "skillet"),
              ("broth", "ladle", "pepper", "salt", "spice", "flame",
               "lid", "stew", "carrot", "celery", "noodle", "gravy")),
    ThemeBank("aquarium", "siphon",
              ("gravel", "tank", "algae", "heater"),
              ("thermometer", "snail", "fin", "pebble", "guppy", "coral",
               "plankton", "aerator", "lighting", "substrate", "nitrate",
               "airstone")),
    ThemeBank("sewing", "hem",
              ("needle", "thread", "seam", "bobbin"),
              ("stitch", "button", "pleat", "pattern", "cuff", "thimble",
               "fray", "pincushion", "tailor", "dart", "lining", "hemline")),
)

_NOISE_WORDS = ("corner", "surface", "portion", "angle", "layer",
                "batch", "notch", "groove", "margin", "strip")


def _theme_block(bank: ThemeBank,
                 rng: random.Random) -> tuple[list[str], list[str]]:
    """Five article sentences for one theme plus its reference headings.

    Mirrors the how-to layout: the reference summary carries one short
    heading per step, so its length tracks the article's (the real corpus
    compresses articles roughly 2.4x, not 6x)."""
    verb = bank.verb
    n1, n2, n3, n4 = bank.nouns
    details = rng.sample(bank.details, 12)
    noise = rng.sample(_NOISE_WORDS, 4)
    key = (f"Remember to {verb} the {n1} and the {n2} before you handle "
           f"the {n3}, so the {n4} will stay in shape.")
    supports = [
        f"Keep the {details[0]} and the {details[1]} close to the {n1} "
        f"while you go over each {details[2]}.",
        f"A clean {details[3]} makes the {n2} much easier to manage when "
        f"the {details[4]} gets in the way of the {noise[0]}.",
        f"Check that the {details[5]} sits level against the {n3} before "
        f"moving the {details[6]} to the next {noise[1]}.",
        f"Many people leave the {details[7]} and the {details[8]} near the "
        f"{noise[2]}, which keeps the {n4} away from the {details[9]}.",
        f"Once the {details[10]} looks even, wipe down the {details[11]} "
        f"along the {noise[3]}.",
    ]
    headings = [
        f"{verb.capitalize()} the {n1} and the {n2} before you handle the {n3}.",
        f"Keep the {details[0]} and the {details[1]} close to the {n1}.",
        f"Check that the {details[5]} sits level against the {n3}.",
    ]
    return [key] + supports, headings


def generate_pair(index: int, rng: random.Random) -> ArticlePair:
    banks = rng.sample(THEME_BANKS, 3)
    sentences: list[str] = []
    headings: list[str] = []
    for bank in banks:
        block, block_headings = _theme_block(bank, rng)
        sentences.extend(block)
        headings.extend(block_headings)
    title = (f"How to {banks[0].verb} the {banks[0].nouns[0]} and "
             f"{banks[1].verb} the {banks[1].nouns[0]}")
    return ArticlePair(
        id=f"{slugify(title)}-{index:04d}",
        title=title,
        article=" ".join(sentences),
        reference_summary="\n".join(headings),
    )


def generate_sample_corpus(n_docs: int, seed: int = 0) -> list[ArticlePair]:
    """n_docs article/summary pairs, a pure function of (n_docs, seed)."""
    rng = random.Random(seed)
    return [generate_pair(i, rng) for i in range(n_docs)]


def write_sample_csv(path, n_docs: int, seed: int = 0) -> None:
    """Write the generated corpus in the (headline, title, text) CSV layout,
    multiline headline fields included."""
    pairs = generate_sample_corpus(n_docs, seed=seed)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["headline", "title", "text"])
        for pair in pairs:
            writer.writerow([pair.reference_summary, pair.title, pair.article])
