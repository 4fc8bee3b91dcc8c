"""
Deterministic suffix-stripping lemmatizer for concept matching.

Maps inflections and common derivations onto one key, e.g. pray, prays,
prayed, prayer, prayers -> "pray" and pregnancy, pregnant -> "pregnant".
Keys are matching keys, not dictionary lemmas.
"""

import re
from functools import lru_cache
from typing import List, Sequence

MIN_STEM_LENGTH = 3

# (suffix, replacement) tried in order; the first rule leaving a long enough stem wins
_RULES = (
    ("ancy", "ant"),
    ("ency", "ent"),
    ("ies", "y"),
    ("ied", "y"),
    ("ings", ""),
    ("ing", ""),
    ("ers", ""),
    ("ed", ""),
    ("er", ""),
    ("s", ""),
)

_KEEP_FINAL_S = ("ss", "us", "is")
_UNDOUBLED = set("lsz")
_WORD = re.compile(r"\w+(?:[-'’]\w+)*")


@lru_cache(maxsize=8192)
def lemmatize(word: str) -> str:
    """Lower-cased matching key of one word."""
    lemma = word.lower()
    for suffix, replacement in _RULES:
        if not lemma.endswith(suffix):
            continue
        if suffix == "s" and lemma.endswith(_KEEP_FINAL_S):
            break
        stem = lemma[: len(lemma) - len(suffix)]
        if len(stem) >= MIN_STEM_LENGTH:
            lemma = stem + replacement
            # stopped -> stopp -> stop
            if not replacement and len(lemma) > MIN_STEM_LENGTH and lemma[-1] == lemma[-2] and lemma[-1] not in _UNDOUBLED:
                lemma = lemma[:-1]
        break

    # reduce / reduced / reduces share a key
    if lemma.endswith("e") and len(lemma) > MIN_STEM_LENGTH:
        lemma = lemma[:-1]
    return lemma


def lemmatize_text(text: str) -> List[str]:
    """Matching keys of the words in a free-text query; punctuation is ignored."""
    return [lemmatize(word) for word in _WORD.findall(text)]


def lemmatize_tokens(tokens: Sequence[str]) -> List[str]:
    return [lemmatize(token) for token in tokens if _WORD.search(token)]
