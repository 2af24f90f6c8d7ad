"""Regenerate the Snowball (English) golden tables with nltk.

snowball_curated.tsv: 50 hand-picked words covering every suffix step.
snowball_nltk.tsv:    a broad word list scraped from Python's bundled docs.
"""
import re
import sys

import pydoc_data.topics
from nltk.stem.snowball import SnowballStemmer

CURATED = """
running quickly happy happiness grinning generously dying lying news skies
caresses ponies ties cats feed agreed plastered bled motoring sing conflated
troubled sized hopping tanned falling hissing fizzed failing filing happily
relational conditional rational valenci hesitanci digitizer conformabli
radicalli differentli vileli analogousli vietnamization predication operator
feudalism decisiveness hopefulness callousness formaliti sensitiviti
sensibiliti triplicate formative formalize electriciti electrical hopeful
goodness revival allowance inference airliner gyroscopic adjustable
defensible irritant replacement adjustment dependent adoption homologou
communism activate angulariti homologous effective bowdlerize probate rate
cease controll roll generate generous commune communal sky idly gently
early only singly canning inning outing exceed succeed proceed herring
earring andes atlas cosmos bias howe
"""


def main(out_dir):
    stem = SnowballStemmer("english").stem
    curated = CURATED.split()[:50]
    with open(f"{out_dir}/snowball_curated.tsv", "w") as fh:
        for w in curated:
            fh.write(f"{w}\t{stem(w)}\n")
    words = set(re.findall(r"[a-z]+", " ".join(pydoc_data.topics.topics.values()).lower()))
    words |= set(CURATED.split())
    words = sorted(w for w in words if 2 <= len(w) <= 20)
    with open(f"{out_dir}/snowball_nltk.tsv", "w") as fh:
        for w in words:
            fh.write(f"{w}\t{stem(w)}\n")


if __name__ == "__main__":
    main(sys.argv[1])
