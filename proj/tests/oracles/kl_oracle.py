"""Reference KL divergence of a text against a directory of reference texts.

Usage: kl_oracle.py TEXT STOPWORDS NAMES OEUVRE_DIR SMOOTHING OUT_JSON
Reference files identical to TEXT are skipped. Uses scipy.stats.entropy.
"""
import json
import os
import sys
from collections import Counter

import numpy as np
from scipy.stats import entropy

import recount


def words_of(raw, stop):
    if "*** START OF" in raw:
        raw = recount.body_of(raw)
    words = [w.lower().replace("’", "'") for w in recount.TOKEN.findall(raw)]
    return [w for w in words if w not in stop]


def load_set(path):
    with open(path, encoding="utf-8") as f:
        return {l.strip() for l in f if l.strip() and not l.startswith("#")}


def main():
    text, stop_path, names_path, oeuvre, smoothing, out = sys.argv[1:7]
    s = float(smoothing)
    stop, names = load_set(stop_path), load_set(names_path)
    with open(text, encoding="utf-8") as f:
        novella_raw = f.read()
    p = Counter(w for w in words_of(novella_raw, stop) if w not in names)
    q = Counter()
    for name in sorted(os.listdir(oeuvre)):
        if not name.endswith(".txt"):
            continue
        with open(os.path.join(oeuvre, name), encoding="utf-8") as f:
            raw = f.read()
        if raw == novella_raw:
            continue
        q.update(w for w in words_of(raw, stop) if w not in names)

    vocab = sorted(set(p) | set(q))
    pv = np.array([p[w] + s for w in vocab])
    qv = np.array([q[w] + s for w in vocab])
    pv, qv = pv / pv.sum(), qv / qv.sum()
    contrib = pv * np.log(pv / qv)
    order = sorted(range(len(vocab)), key=lambda i: (-contrib[i], vocab[i]))
    result = {
        "divergence": float(entropy(pv, qv)),
        "vocab_size": len(vocab),
        "top": [{"word": vocab[i], "contribution": float(contrib[i])} for i in order[:10]],
    }
    with open(out, "w") as f:
        json.dump(result, f, indent=1)


if __name__ == "__main__":
    main()
