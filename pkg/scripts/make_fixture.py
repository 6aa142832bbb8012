"""Regenerate tests/data/ud_sample.conllu: 100 UD-style sentences with full columns,
multiword-token ranges, empty nodes, comments and a few
unannotated UPOS values."""

import random
import sys
from pathlib import Path

from xlpos.synth import generate_sentence

CONTRACT = {("in", "the"): "inthe", ("with", "the"): "withthe"}


def main(out):
    rng = random.Random(2021)
    blocks = []
    for k in range(1, 101):
        words = generate_sentence(rng)
        lines = [f"# sent_id = fixture-{k}", "# text = " + " ".join(w for w, _ in words)]
        i = 0
        while i < len(words):
            pair = tuple(w for w, _ in words[i:i + 2])
            if pair in CONTRACT:
                lines.append(f"{i + 1}-{i + 2}\t{CONTRACT[pair]}\t_\t_\t_\t_\t_\t_\t_\t_")
            w, t = words[i]
            if k % 10 == 0 and i == len(words) - 1:
                t = "_"
            lemma = w.lower()
            head = 0 if i == 0 else 1
            lines.append(f"{i + 1}\t{w}\t{lemma}\t{t}\t_\t_\t{head}\t{'root' if head == 0 else 'dep'}\t_\t_")
            if k % 17 == 0 and i == 1:
                lines.append(f"{i + 1}.1\telided\t_\t_\t_\t_\t_\t_\t{head}:dep\t_")
            i += 1
        blocks.append("\n".join(lines) + "\n")
    Path(out).write_text("\n".join(blocks) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/ud_sample.conllu")
