"""TF-IDF reference values from scikit-learn on a fixed pre-tokenized corpus.

    python3 gen_tfidf_sklearn.py <fixtures-dir>
"""
import json
import sys
from pathlib import Path

from sklearn.feature_extraction.text import TfidfVectorizer

DOCS = [
    ["happi", "day", "happi", "sun"],
    ["sad", "rain", "day"],
    ["angri", "traffic", "angri", "angri"],
    ["scare", "dark", "night", "day"],
    ["meet", "offic", "coffe"],
    [],
    ["sun", "coffe", "happi"],
    ["rain", "rain", "night", "sad", "cri"],
    ["day"],
    ["traffic", "offic", "meet", "day", "sun"],
]
PROBES = [["happi", "rain", "unseen"], ["unseen"], ["day", "day", "day"]]


def main(out_dir):
    vec = TfidfVectorizer(analyzer=lambda d: d, smooth_idf=True, sublinear_tf=False, norm="l2")
    fitted = vec.fit_transform(DOCS).toarray()
    probes = vec.transform(PROBES).toarray()
    vocab = sorted(vec.vocabulary_, key=vec.vocabulary_.get)
    doc = {
        "sklearn_version": __import__("sklearn").__version__,
        "docs": DOCS,
        "probes": PROBES,
        "vocabulary": vocab,
        "idf": vec.idf_.tolist(),
        "rows": fitted.tolist(),
        "probe_rows": probes.tolist(),
    }
    Path(out_dir, "tfidf_sklearn.json").write_text(json.dumps(doc, indent=1) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
