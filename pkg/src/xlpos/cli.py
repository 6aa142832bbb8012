"""Command-line driver: align -> project -> train -> tag -> eval, plus a synthetic corpus generator.

Every subcommand accepts ``--config FILE`` with ``key=value`` lines (keys are the
long option names, with dashes or underscores); explicit flags override the file.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import aligner, hmm, projection
from .corpus import (
    Sentence, SentencePair, parse_conllu, read_bitext, read_conllu, write_bitext, write_conllu,
)
from .evalmetrics import (
    EvalReport, dump_keyvalue, evaluate, parse_columns, render_table, report_from_pairs,
)
from .synth import synthesize

log = logging.getLogger("xlpos")


class StageError(RuntimeError):
    pass


@dataclass
class PipelineConfig:
    source: Optional[Path] = None
    bitext: Optional[Path] = None
    alignment: Optional[Path] = None  # external Pharaoh file; skips our aligner
    test: Optional[Path] = None
    out_dir: Path = Path("out")
    variant: str = aligner.Variant.DIAG_IBM2.value
    iterations: int = 5
    tension: float = 4.0
    null_prob: float = 0.08
    heuristic: str = aligner.Heuristic.GROW_DIAG_FINAL_AND.value
    workers: int = 1
    alpha: float = 1e-6
    limit_sentences: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")

    @property
    def diag_params(self) -> aligner.DiagonalParams:
        return aligner.DiagonalParams(self.tension, self.null_prob)

    @property
    def decoding(self) -> hmm.DecodingConfig:
        return hmm.DecodingConfig(self.alpha)


def _require(path, what):
    if path is None:
        raise ValueError(f"missing required {what} path")
    if not Path(path).exists():
        raise FileNotFoundError(f"{what} file not found: {path}")
    return Path(path)


def _write(path: Path, data: bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)


# stage functions: pure-ish, return in-memory results and write artifacts when given a path

def stage_align(pairs: list[SentencePair], cfg: PipelineConfig, out: Optional[Path] = None):
    alignments = aligner.align_corpus(
        pairs, aligner.Variant(cfg.variant), cfg.iterations, cfg.diag_params,
        aligner.Heuristic(cfg.heuristic), cfg.workers,
    )
    if out is not None:
        _write(out, aligner.dump_pharaoh(alignments))
    return alignments


def stage_project(source, pairs, alignments, out: Optional[Path] = None, summary_out: Optional[Path] = None):
    sents, summary = projection.project_corpus(source, pairs, alignments)
    if out is not None:
        _write(out, write_conllu(sents))
    if summary_out is not None:
        _write(summary_out, summary.render().encode("utf-8"))
    return sents, summary


def stage_train(corpus: list[Sentence], limit: Optional[int] = None, out: Optional[Path] = None):
    if limit is not None:
        corpus = corpus[:limit]
    model = hmm.train(corpus)
    if out is not None:
        _write(out, hmm.save_model(model))
    return model


def stage_tag(model, sentences, decoding, out: Optional[Path] = None):
    pred = hmm.tag_sentences(model, sentences, decoding)
    if out is not None:
        _write(out, write_conllu(pred))
    return pred


def read_tag_input(path: Path, fmt: str = "auto") -> list[Sentence]:
    """Untagged sentences from CoNLL-U (forms only) or one-sentence-per-line text."""
    data = Path(path).read_bytes()
    if fmt == "auto":
        first = next((ln for ln in data.decode("utf-8").split("\n") if ln.strip() and not ln.startswith("#")), "")
        fmt = "conllu" if path.suffix == ".conllu" or first.count("\t") >= 9 else "text"
    if fmt == "conllu":
        return [Sentence.from_pairs(((f, None) for f in s.forms), s.id) for s in parse_conllu(data)]
    out = []
    for line in data.decode("utf-8").split("\n"):
        words = line.split()
        if words:
            out.append(Sentence.from_pairs((w, None) for w in words))
    return out


def run_pipeline(cfg: PipelineConfig) -> EvalReport:
    out = Path(cfg.out_dir)
    stage = "load"
    try:
        source = read_conllu(_require(cfg.source, "source CoNLL-U"))
        pairs = read_bitext(_require(cfg.bitext, "bitext"))
        test = read_conllu(_require(cfg.test, "test CoNLL-U"))

        stage = "align"
        if cfg.alignment is not None:
            alignments = aligner.read_pharaoh_file(_require(cfg.alignment, "alignment"))
            _write(out / "alignments.pharaoh", aligner.dump_pharaoh(alignments))
        else:
            alignments = stage_align(pairs, cfg, out / "alignments.pharaoh")
        log.info("NULL-alignment rate %.4f", aligner.null_rate(pairs, alignments))

        stage = "project"
        projected, summary = stage_project(
            source, pairs, alignments, out / "projected.conllu", out / "projection_summary.txt"
        )

        stage = "train"
        model = stage_train(projected, cfg.limit_sentences, out / "model.hmm")

        stage = "tag"
        untagged = [Sentence.from_pairs(((f, None) for f in s.forms), s.id) for s in test]
        pred = stage_tag(model, untagged, cfg.decoding, out / "predictions.conllu")

        stage = "eval"
        report = evaluate(test, pred)
        _write(out / "report.txt", render_table(report).encode("utf-8"))
        _write(out / "report.kv", dump_keyvalue(report).encode("utf-8"))
    except (OSError, ValueError) as e:
        raise StageError(f"stage {stage!r} failed: {e}") from e
    return report


# argparse wiring

def _add_aligner_opts(p):
    p.add_argument("--variant", choices=[v.value for v in aligner.Variant], default="diag")
    p.add_argument("--iterations", type=int, default=5)
    p.add_argument("--tension", type=float, default=4.0)
    p.add_argument("--null-prob", type=float, default=0.08)
    p.add_argument("--heuristic", choices=[h.value for h in aligner.Heuristic],
                   default=aligner.Heuristic.GROW_DIAG_FINAL_AND.value)
    p.add_argument("--workers", type=int, default=1, help="processes for the EM E-step")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="xlpos", description=__doc__.split("\n")[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    ap.commands = {}

    def add(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--config", type=Path, help="key=value defaults file")
        ap.commands[name] = p
        return p

    p = add("align", "train word aligners on a bitext and write Pharaoh alignments")
    p.add_argument("--bitext", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    _add_aligner_opts(p)

    p = add("project", "project source tags through alignments onto the target side")
    p.add_argument("--source", type=Path, required=True, help="tagged source CoNLL-U")
    p.add_argument("--bitext", type=Path, required=True)
    p.add_argument("--alignment", type=Path, required=True, help="Pharaoh file")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--summary", type=Path)

    p = add("train", "train an HMM tagger from a tagged CoNLL-U corpus")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--limit-sentences", type=int, help="keep only the first N sentences")

    p = add("tag", "tag sentences with a trained HMM")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--format", choices=["auto", "conllu", "text"], default="auto")
    p.add_argument("--out", type=Path, help="CoNLL-U output (default: stdout)")
    p.add_argument("--alpha", type=float, default=1e-6, help="additive transition smoothing")

    p = add("eval", "per-tag precision/recall/F1")
    p.add_argument("--gold", type=Path)
    p.add_argument("--pred", type=Path)
    p.add_argument("--columns", type=Path, help="form<TAB>gold<TAB>pred file instead of --gold/--pred")
    p.add_argument("--dump", type=Path, help="write key=value metrics here")

    p = add("pipeline", "align, project, train, tag and evaluate in one go")
    p.add_argument("--source", type=Path, required=True)
    p.add_argument("--bitext", type=Path, required=True)
    p.add_argument("--alignment", type=Path, help="external Pharaoh file (skips alignment)")
    p.add_argument("--test", type=Path, required=True, help="gold target-language CoNLL-U")
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--alpha", type=float, default=1e-6)
    p.add_argument("--limit-sentences", type=int)
    _add_aligner_opts(p)

    p = add("synth", "write a synthetic cipher corpus for end-to-end checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-sentences", type=int, default=500)
    p.add_argument("--n-test", type=int, default=100)
    p.add_argument("--out-dir", type=Path, required=True)
    return ap


def read_config(path) -> dict:
    conf = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").split("\n"), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}: line {lineno}: expected key=value")
        conf[key.strip().replace("-", "_")] = value.strip()
    return conf


def parse_args(argv=None) -> argparse.Namespace:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path)
    known, _ = pre.parse_known_args(argv)
    command = next((a for a in argv if a in ap.commands), None)
    if known.config is not None and command is not None:
        conf = read_config(known.config)
        subparser = ap.commands[command]
        dests = {a.dest for a in subparser._actions}
        unknown = set(conf) - dests
        if unknown:
            ap.error(f"unknown config keys for {command}: {', '.join(sorted(unknown))}")
        for a in subparser._actions:
            if a.dest in conf:
                a.required = False
        # string defaults are run through each option's type; explicit flags still win
        subparser.set_defaults(**conf)
    return ap.parse_args(argv)


def _config_from_args(args) -> PipelineConfig:
    fields = PipelineConfig.__dataclass_fields__
    return PipelineConfig(**{k: v for k, v in vars(args).items() if k in fields})


def cmd_align(args):
    cfg = _config_from_args(args)
    pairs = read_bitext(_require(args.bitext, "bitext"))
    alignments = stage_align(pairs, cfg, args.out)
    print(f"NULL-alignment rate: {aligner.null_rate(pairs, alignments):.4f}")


def cmd_project(args):
    source = read_conllu(_require(args.source, "source CoNLL-U"))
    pairs = read_bitext(_require(args.bitext, "bitext"))
    alignments = aligner.read_pharaoh_file(_require(args.alignment, "alignment"))
    _, summary = stage_project(source, pairs, alignments, args.out, args.summary)
    sys.stdout.write(summary.render())


def cmd_train(args):
    corpus = read_conllu(_require(args.corpus, "corpus"))
    model = stage_train(corpus, args.limit_sentences, args.out)
    print(f"trained on {model.n_sentences} sentences, {len(model.states)} states, "
          f"{len(model.vocabulary)} word types")


def cmd_tag(args):
    model = hmm.load_model(_require(args.model, "model").read_bytes())
    sents = read_tag_input(_require(args.input, "input"), args.format)
    pred = stage_tag(model, sents, hmm.DecodingConfig(args.alpha), args.out)
    if args.out is None:
        sys.stdout.write(write_conllu(pred).decode("utf-8"))


def cmd_eval(args):
    if args.columns is not None:
        report = report_from_pairs(parse_columns(_require(args.columns, "columns").read_bytes()))
    else:
        gold = read_conllu(_require(args.gold, "gold"))
        pred = read_conllu(_require(args.pred, "prediction"))
        report = evaluate(gold, pred)
    sys.stdout.write(render_table(report))
    if args.dump is not None:
        _write(args.dump, dump_keyvalue(report).encode("utf-8"))


def cmd_pipeline(args):
    report = run_pipeline(_config_from_args(args))
    sys.stdout.write(render_table(report))


def cmd_synth(args):
    corpus = synthesize(args.seed, args.n_sentences, args.n_test)
    out = args.out_dir
    _write(out / "source.conllu", write_conllu(corpus.source))
    _write(out / "bitext.txt", write_bitext(corpus.bitext))
    _write(out / "target_gold.conllu", write_conllu(corpus.target_gold))
    _write(out / "test.conllu", write_conllu(corpus.test_gold))
    print(f"wrote {len(corpus.source)} training pairs and {len(corpus.test_gold)} test sentences to {out}")


COMMANDS = {
    "align": cmd_align, "project": cmd_project, "train": cmd_train, "tag": cmd_tag,
    "eval": cmd_eval, "pipeline": cmd_pipeline, "synth": cmd_synth,
}


def main(argv=None) -> int:
    args = parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        COMMANDS[args.command](args)
    except (OSError, ValueError, RuntimeError) as e:
        print(f"xlpos {args.command}: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
