"""Candidate extraction: tokenization, rule-based POS tagging, NP chunking.

The pipeline's front end turns raw text into a deduplicated list of
noun-phrase candidates. The bundled tagger is a small deterministic rule
system over a coarse 4-tag set {NOUN, ADJ, VERB, OTHER}; datasets may
bypass it entirely by supplying pre-tagged tokens. Candidates are maximal
(ADJ)* (NOUN)+ spans of at most ``max_len`` tokens, split greedily left to
right when a maximal span would exceed the cap.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .model import Candidate

ASCII_PUNCT = frozenset(string.punctuation)

_SENTENCE_END = frozenset({".", "!", "?"})


@dataclass(frozen=True)
class TaggedToken:
    """One token with its coarse POS tag and 0-based document position."""

    text: str
    tag: str
    index: int


def tokenize(text: str) -> List[Tuple[str, int]]:
    """Split text into (token, index) pairs.

    Splits on Unicode whitespace, then peels leading and trailing ASCII
    punctuation off each chunk into standalone single-character tokens.
    Internal punctuation (hyphens, apostrophes, ...) is preserved, so
    "state-of-the-art" stays one token. Indices are 0-based and
    consecutive over the emitted sequence. Empty input yields [].
    """
    out: List[str] = []
    for chunk in text.split():
        leading: List[str] = []
        while chunk and chunk[0] in ASCII_PUNCT:
            leading.append(chunk[0])
            chunk = chunk[1:]
        trailing: List[str] = []
        while chunk and chunk[-1] in ASCII_PUNCT:
            trailing.append(chunk[-1])
            chunk = chunk[:-1]
        out.extend(leading)
        if chunk:
            out.append(chunk)
        out.extend(reversed(trailing))
    return [(token, i) for i, token in enumerate(out)]


# Closed-class words: determiners, pronouns, prepositions, conjunctions,
# auxiliaries, common adverbs and number words. All map to OTHER, which
# breaks noun-phrase spans.
CLOSED_CLASS = frozenset("""
a an the this that these those each every either neither some any no all
both few many much more most other another such same own certain
i you he she it we they me him her us them my your his its our their
mine yours hers ours theirs myself yourself himself herself itself
ourselves yourselves themselves who whom whose which what
of in on at by for with from to into onto upon about above below under
over between among through during before after since until within
without across behind beyond near toward towards against along around
off out up down per via amid despite than as
and or but nor so yet if because although though while whereas unless
whether once when where why how
be am is are was were been being do does did doing have has had having
will would shall should can could may might must ought
not never also just only even still too very quite rather almost always
often sometimes usually perhaps maybe however therefore thus hence
moreover furthermore meanwhile otherwise instead indeed already again
there here then now
one two three four five six seven eight nine ten first second third
""".split())

# Content words the suffix rules would miss or mis-tag. VERB entries are
# spelled out per form; the tagger does no morphology beyond suffixes.
WORD_TAGS = {}
WORD_TAGS.update({w: "ADJ" for w in """
deep new novel large small high low good better best great big main key
major minor modern complex simple fast slow strong weak early late long
short wide broad narrow rich poor common rare robust quick dense sparse
""".split()})
WORD_TAGS.update({w: "VERB" for w in """
improve improves improved show shows showed shown use uses used propose
proposes proposed present presents presented make makes made take takes
taken took give gives given gave find finds found provide provides
provided achieve achieves achieved apply applies applied demonstrate
demonstrates demonstrated evaluate evaluates evaluated introduce
introduces introduced describe describes described perform performs
performed obtain obtains obtained require requires required enable
enables enabled reduce reduces reduced compare compares compared select
selects outperform outperforms outperformed consist consists consisted
include includes included contain contains contained remain remains
remained become becomes became get gets got run runs ran play plays
played done extract extracts extracted yield yields yielded
""".split()})
WORD_TAGS.update({w: "NOUN" for w in """
retrieval proposal approach data result results method methods model
models system systems work works number time part set way
""".split()})

# Suffix heuristics, longest first. Applied only when the stem keeps at
# least two characters beyond the suffix.
_SUFFIX_TAGS = (
    ("tion", "NOUN"), ("ment", "NOUN"), ("ness", "NOUN"), ("able", "ADJ"),
    ("ity", "NOUN"), ("ive", "ADJ"), ("ous", "ADJ"), ("ful", "ADJ"),
    ("ing", "NOUN"), ("er", "NOUN"), ("al", "ADJ"),
)


def _tag_one(token: str, sentence_internal: bool) -> str:
    if not any(ch.isalpha() for ch in token):
        return "OTHER"
    word = token.casefold()
    if word in CLOSED_CLASS:
        return "OTHER"
    if word in WORD_TAGS:
        return WORD_TAGS[word]
    for suffix, tag in _SUFFIX_TAGS:
        if word.endswith(suffix) and len(word) >= len(suffix) + 2:
            return tag
    if sentence_internal and token[0].isupper():
        return "NOUN"
    # most-frequent-tag baseline for unknown content words
    return "NOUN"


def pos_tag(tokens: Sequence[str]) -> List[TaggedToken]:
    """Assign one coarse tag per token with the bundled rule tagger.

    Rule order: punctuation/numeric tokens and closed-class words get
    OTHER; the content lexicon and suffix heuristics come next; remaining
    sentence-internal capitalized tokens get NOUN; everything else
    defaults to NOUN. Fully deterministic.
    """
    tagged = []
    prev: Optional[str] = None
    for i, token in enumerate(tokens):
        sentence_internal = i > 0 and prev not in _SENTENCE_END
        tagged.append(TaggedToken(token, _tag_one(token, sentence_internal), i))
        prev = token
    return tagged


def chunk_noun_phrases(tagged: Sequence[TaggedToken], max_len: int) -> List[Candidate]:
    """Extract (ADJ)* (NOUN)+ spans of at most ``max_len`` tokens.

    Scans left to right, taking the longest grammar match at each start
    position (maximal munch); spans longer than ``max_len`` are split
    greedily. Spans never overlap. Documents with no noun phrases yield
    an empty list.
    """
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    out: List[Candidate] = []
    n = len(tagged)
    i = 0
    while i < n:
        adj = 0
        while i + adj < n and tagged[i + adj].tag == "ADJ":
            adj += 1
        nouns = 0
        while i + adj + nouns < n and tagged[i + adj + nouns].tag == "NOUN":
            nouns += 1
        if nouns == 0 or adj + 1 > max_len:
            i += 1
            continue
        take = min(adj + nouns, max_len)
        span = tagged[i:i + take]
        surface = " ".join(t.text for t in span)
        out.append(Candidate(
            surface=surface,
            normalized=normalize_phrase(surface),
            position=span[0].index,
            length_tokens=take,
        ))
        i += take
    return out


def normalize_phrase(text: str) -> str:
    """Case-fold and collapse runs of whitespace to single spaces."""
    return " ".join(text.split()).casefold()


def normalize_and_dedup(cands: Iterable[Candidate]) -> List[Candidate]:
    """Drop repeats of the same normalized form, keeping the first.

    Input order (document order) is preserved; the surviving candidate
    keeps its original surface and position.
    """
    seen = set()
    out = []
    for cand in cands:
        if cand.normalized in seen:
            continue
        seen.add(cand.normalized)
        out.append(cand)
    return out


def extract_candidates(text: str = "", tokens=None, max_phrase_tokens: int = 5) -> List[Candidate]:
    """Run the full extraction front end on one document.

    Uses pre-tagged ``tokens`` ((text, tag) pairs) when given, otherwise
    tokenizes and tags ``text``. Returns deduplicated candidates in
    document order.
    """
    if tokens is not None:
        tagged = [TaggedToken(t, tag, i) for i, (t, tag) in enumerate(tokens)]
    else:
        tagged = pos_tag([t for t, _ in tokenize(text)])
    return normalize_and_dedup(chunk_noun_phrases(tagged, max_phrase_tokens))
