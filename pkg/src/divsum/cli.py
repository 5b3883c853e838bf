"""Command line front end.

Verbs: ``summarize``, ``evaluate``, ``inspect-graph``, ``inspect-matrix``.
Exit codes: 0 success, 2 configuration error, 3 corpus error, 4 degenerate
input.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Optional, Sequence

from .baselines import RNG_NAME, base_first, base_rand
from .evaluation import EvalReport, EvalRow, checksum, fresa, rouge_scores
from .exceptions import ConfigurationError, CorpusError, DegenerateInputError, UndefinedMetricError
from .graphsum import D_FRASE, D_TEXTO, D_TITULO, KEEP_FRACTION, SasiThresholds, rag_scores, rag_summarize, sasi_graph, sasi_summarize
from .matrixsum import summatrix_fold, summatrix_summarize
from .simdiv import DEFAULT_GAMMA
from .summary import DEFAULT_DICE, DEFAULT_TC, Summary
from .textprep import Cluster, Document, TextPreprocessor
from .transcript import TRANSCRIPT_TC, lia_rag_summarize, load_rules
from .validation import check_budget, check_positive, check_text_input, check_unit_interval

ALGORITHMS = ("sasi", "rag", "lia-rag", "summatrix", "base-first", "base-rand")
EXIT_OK, EXIT_CONFIG, EXIT_CORPUS, EXIT_DEGENERATE = 0, 2, 3, 4

# default-source tags shown in --help
PUB = "published default"
KIT = "toolkit choice"


def _version() -> str:
    try:
        return metadata.version("divsum")
    except metadata.PackageNotFoundError:  # pragma: no cover - source checkout
        return "0+unknown"


@dataclass
class RunConfig:
    algorithm: str = "sasi"
    language: str = "pt"
    tc: Optional[float] = None
    max_words: Optional[int] = None
    d_frase: float = D_FRASE
    d_titulo: float = D_TITULO
    d_texto: float = D_TEXTO
    gamma: float = DEFAULT_GAMMA
    dice_threshold: float = DEFAULT_DICE
    keep_fraction: float = KEEP_FRACTION
    divergence: str = "js"
    seed: Optional[int] = None
    stemmer: str = "light"
    title: bool = False
    cluster: bool = False
    stopwords: Optional[str] = None
    rules: Optional[str] = None
    inputs: list = field(default_factory=list)
    out: str = "summaries"
    run: str = "divsum"

    @property
    def effective_tc(self) -> float:
        if self.tc is not None:
            return self.tc
        return TRANSCRIPT_TC if self.algorithm == "lia-rag" else DEFAULT_TC

    def validate(self) -> "RunConfig":
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"unknown algorithm {self.algorithm!r}; choose from {', '.join(ALGORITHMS)}")
        check_budget(self.effective_tc, self.max_words)
        for name in ("d_frase", "d_titulo", "d_texto", "gamma"):
            check_positive(name, getattr(self, name))
        check_unit_interval("dice_threshold", self.dice_threshold)
        check_unit_interval("keep_fraction", self.keep_fraction, closed_left=True)
        if self.divergence not in ("js", "kl"):
            raise ConfigurationError("divergence must be js or kl")
        if self.algorithm == "base-rand" and self.seed is None:
            raise ConfigurationError("--algo base-rand requires --seed")
        if self.stopwords is not None and not Path(self.stopwords).is_file():
            raise ConfigurationError(f"stopword file not found: {self.stopwords}")
        if self.rules is not None and not Path(self.rules).is_file():
            raise ConfigurationError(f"rule file not found: {self.rules}")
        return self

    def preprocessor(self) -> TextPreprocessor:
        return TextPreprocessor(
            language=self.language,
            stemmer=self.stemmer,
            stopwords=self.stopwords,
            title=self.title,
            line_breaks=self.algorithm == "lia-rag",
        )


# ---------------------------------------------------------------------------
# Corpus reading
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Item:
    """One unit of work: a single text or a cluster of texts."""

    name: str
    paths: tuple

    @property
    def is_cluster(self) -> bool:
        return len(self.paths) > 1


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusError(f"cannot read {path}: {exc}") from exc


def _text_files(directory: Path) -> list:
    return sorted((p for p in directory.iterdir() if p.is_file() and not p.name.startswith(".")), key=lambda p: p.name)


def collect_items(inputs: Sequence[str], as_cluster: bool = False) -> list:
    """Files are single documents.  A directory holding subdirectories yields
    one cluster per subdirectory; a directory of files yields one document
    per file, or one cluster with ``as_cluster``.  Cluster members are read
    in lexicographic file-name order."""
    items = []
    for raw in inputs:
        path = Path(raw)
        if path.is_file():
            items.append(Item(path.stem, (path,)))
        elif path.is_dir():
            subdirs = sorted((p for p in path.iterdir() if p.is_dir()), key=lambda p: p.name)
            if subdirs:
                for sub in subdirs:
                    files = _text_files(sub)
                    if not files:
                        raise CorpusError(f"cluster directory {sub} is empty")
                    items.append(Item(sub.name, tuple(files)))
            elif as_cluster:
                files = _text_files(path)
                if not files:
                    raise CorpusError(f"cluster directory {path} is empty")
                items.append(Item(path.name, tuple(files)))
            else:
                items.extend(Item(p.stem, (p,)) for p in _text_files(path))
        else:
            raise CorpusError(f"input not found: {raw}")
    if not items:
        raise CorpusError("no input texts found")
    names = [i.name for i in items]
    dup = {n for n in names if names.count(n) > 1}
    if dup:
        raise CorpusError(f"several inputs map to the same output name: {', '.join(sorted(dup))}")
    return items


def load_item(item: Item, prep: TextPreprocessor):
    raws = [_read(p) for p in item.paths]
    if item.is_cluster:
        return prep.make_cluster(raws, item.name, [p.stem for p in item.paths]), raws
    return prep.make_document(raws[0], item.name), raws


# ---------------------------------------------------------------------------
# summarize
# ---------------------------------------------------------------------------


def summarize_item(cfg: RunConfig, item: Item) -> tuple[Summary, list]:
    prep = cfg.preprocessor()
    x, raws = load_item(item, prep)
    tc, mw = cfg.effective_tc, cfg.max_words
    algo = cfg.algorithm
    if algo == "lia-rag":
        if item.is_cluster:
            raise ConfigurationError("lia-rag summarizes one transcript at a time")
        rules = load_rules(cfg.language, cfg.rules)
        s = lia_rag_summarize(
            raws[0], rules, prep, cfg.d_frase, cfg.gamma, cfg.keep_fraction, cfg.dice_threshold, tc, mw, item.name
        )
        return s, raws
    if algo == "base-first":
        return base_first(x, tc, mw), raws
    if algo == "base-rand":
        return base_rand(x, cfg.seed, tc, mw), raws
    x = check_text_input(x, prep)
    if algo == "sasi":
        th = SasiThresholds(cfg.d_frase, cfg.d_titulo, cfg.d_texto)
        return sasi_summarize(x, th, cfg.gamma, cfg.dice_threshold, tc, mw), raws
    if algo == "rag":
        return rag_summarize(x, cfg.d_frase, cfg.gamma, cfg.keep_fraction, cfg.dice_threshold, tc, mw), raws
    return summatrix_summarize(x, cfg.gamma, cfg.dice_threshold, tc, mw, cfg.divergence), raws


def _work(args):
    cfg, item = args
    try:
        summary, raws = summarize_item(cfg, item)
    except DegenerateInputError as exc:
        return item, None, None, str(exc)
    return item, summary, raws, None


def run_summarize(cfg: RunConfig, jobs: int = 1) -> dict:
    """Summarize every input, write ``<name>.sum.txt`` files and the
    ``<run>.report.json`` report; return the report dict."""
    cfg.validate()
    items = collect_items(cfg.inputs, cfg.cluster)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    work = [(cfg, it) for it in items]
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_work, work))
    else:
        results = [_work(w) for w in work]
    entries, failures = [], []
    for item, summary, raws, error in results:
        if error is not None:
            failures.append({"input": item.name, "error": error})
            continue
        target = out / f"{item.name}.sum.txt"
        target.write_text(summary.text + ("\n" if summary.entries else ""), encoding="utf-8")
        entries.append(
            {
                "input": item.name,
                "files": [str(p) for p in item.paths],
                "sha256": [checksum(r) for r in raws],
                "output": str(target),
                "status": summary.status,
                "budget": summary.budget,
                "source_words": summary.source_words,
                "summary_words": summary.word_count,
                "sentences": [f"{d}-{i + 1}" for d, i in summary.keys],
            }
        )
    report = {
        "tool": "divsum",
        "version": _version(),
        "config": {k: v for k, v in asdict(cfg).items() if k != "inputs"} | {"tc": cfg.effective_tc},
        "rng": RNG_NAME if cfg.algorithm == "base-rand" else None,
        "summaries": entries,
        "failures": failures,
    }
    (out / f"{cfg.run}.report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    if failures:
        raise DegenerateInputError("; ".join(f"{f['input']}: {f['error']}" for f in failures))
    return report


# ---------------------------------------------------------------------------
# evaluate
# ---------------------------------------------------------------------------


def _candidate_name(path: Path) -> str:
    name = path.name
    for suffix in (".sum.txt", ".txt"):
        if name.endswith(suffix):
            return name[: -len(suffix)]
    return path.stem


def _references_for(name: str, ref_dir: Path) -> list:
    sub = ref_dir / name
    if sub.is_dir():
        return _text_files(sub)
    return [p for p in _text_files(ref_dir) if p.name == f"{name}.txt" or p.name.startswith(f"{name}.")]


def _source_for(name: str, src_dir: Path) -> str:
    sub = src_dir / name
    if sub.is_dir():
        return "\n\n".join(_read(p) for p in _text_files(sub))
    f = src_dir / f"{name}.txt"
    if f.is_file():
        return _read(f)
    raise CorpusError(f"no source text for candidate {name!r} in {src_dir}")


def run_evaluate(
    candidates: str,
    references: Optional[str],
    sources: Optional[str],
    do_rouge: bool,
    do_fresa: bool,
    language: str = "pt",
    stemmer: str = "light",
    gamma: float = DEFAULT_GAMMA,
    beta: float = 1.0,
    max_gap: int = 4,
    out: str = ".",
    run: str = "divsum-eval",
) -> EvalReport:
    if not (do_rouge or do_fresa):
        raise ConfigurationError("choose at least one of --rouge / --fresa")
    if do_rouge and references is None:
        raise ConfigurationError("--rouge needs a reference directory")
    if do_fresa and sources is None:
        raise ConfigurationError("--fresa needs a source directory")
    cand_dir = Path(candidates)
    if not cand_dir.is_dir():
        raise CorpusError(f"candidate directory not found: {candidates}")
    for d in (references, sources):
        if d is not None and not Path(d).is_dir():
            raise CorpusError(f"directory not found: {d}")
    prep = TextPreprocessor(language=language, stemmer=stemmer)
    files = [p for p in _text_files(cand_dir) if not p.name.endswith(".json")]
    if not files:
        raise CorpusError(f"no candidate summaries in {candidates}")
    rows, sums = [], {}
    for path in files:
        name = _candidate_name(path)
        text = _read(path)
        sums[name] = checksum(text)
        row = EvalRow(name)
        cand = prep.make_document(text, name)
        if do_rouge:
            refs = _references_for(name, Path(references))
            if not refs:
                raise CorpusError(f"no reference summary for candidate {name!r} in {references}")
            row.rouge = rouge_scores(cand, [prep.make_document(_read(r)) for r in refs], beta, max_gap)
        if do_fresa:
            src = prep.make_document(_source_for(name, Path(sources)), name)
            row.fresa = fresa(cand, src, gamma)
            if row.fresa.empty_summary:
                row.notes.append("empty summary: divergences set to ln 2")
        rows.append(row)
    report = EvalReport(
        rows,
        {
            "tool": "divsum",
            "version": _version(),
            "config": {
                "language": language,
                "stemmer": stemmer,
                "gamma": gamma,
                "beta": beta,
                "max_gap": max_gap,
                "rouge_n": "recall",
                "fresa_orientation": "divergence lower is better; complement = 1 - divergence",
            },
            "candidates_sha256": sums,
        },
    )
    target = Path(out)
    target.mkdir(parents=True, exist_ok=True)
    (target / f"{run}.report.json").write_text(report.to_json(), encoding="utf-8")
    (target / f"{run}.report.csv").write_text(report.to_csv(), encoding="utf-8")
    return report


# ---------------------------------------------------------------------------
# inspection
# ---------------------------------------------------------------------------


def inspect_graph(cfg: RunConfig) -> str:
    cfg.validate()
    if cfg.algorithm not in ("sasi", "rag"):
        raise ConfigurationError("inspect-graph supports --algo sasi or rag")
    (item,) = _single(cfg)
    prep = cfg.preprocessor()
    x = check_text_input(load_item(item, prep)[0], prep)
    if cfg.algorithm == "sasi":
        return sasi_graph(x, SasiThresholds(cfg.d_frase, cfg.d_titulo, cfg.d_texto), cfg.gamma)[1].to_dot()
    return rag_scores(x, cfg.d_frase, cfg.gamma, cfg.keep_fraction).graph.to_dot()


def inspect_matrix(cfg: RunConfig) -> str:
    cfg.validate()
    (item,) = _single(cfg, as_cluster=True)
    prep = cfg.preprocessor()
    x = load_item(item, prep)[0]
    if isinstance(x, Document):
        raise DegenerateInputError("inspect-matrix needs a cluster of at least two texts")
    parts = []
    for k, step in enumerate(summatrix_fold(x, cfg.gamma, cfg.divergence).steps, 1):
        parts.append(f"# step {k}\n{step.matrix.to_csv()}")
    return "\n".join(parts)


def _single(cfg: RunConfig, as_cluster: bool = False):
    items = collect_items(cfg.inputs, as_cluster or cfg.cluster)
    if len(items) != 1:
        raise ConfigurationError(f"expected exactly one input text or cluster, got {len(items)}")
    return items


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("inputs", nargs="+", help="text files or directories (a directory of directories = clusters)")
    p.add_argument("--algo", dest="algorithm", default="sasi", choices=ALGORITHMS, help=f"summarizer (default sasi, {KIT})")
    p.add_argument("--lang", dest="language", default="pt", help=f"language of the bundled resources (default pt, {KIT})")
    budget = p.add_mutually_exclusive_group()
    budget.add_argument(
        "--tc",
        type=float,
        default=None,
        help=f"compression rate in (0, 1] (default {DEFAULT_TC}; {TRANSCRIPT_TC} for lia-rag; {PUB})",
    )
    budget.add_argument("--max-words", type=int, default=None, help="absolute word budget, overrides --tc")
    p.add_argument("--d-frase", type=float, default=D_FRASE, help=f"sentence-sentence JS cutoff (default {D_FRASE}, {PUB})")
    p.add_argument("--d-titulo", type=float, default=D_TITULO, help=f"sentence-title JS cutoff (default {D_TITULO}, {PUB})")
    p.add_argument("--d-texto", type=float, default=D_TEXTO, help=f"sentence-text JS cutoff (default {D_TEXTO}, {PUB})")
    p.add_argument("--gamma", type=float, default=DEFAULT_GAMMA, help=f"smoothing parameter (default {DEFAULT_GAMMA}, {PUB})")
    p.add_argument(
        "--dice", dest="dice_threshold", type=float, default=DEFAULT_DICE, help=f"Dice redundancy cutoff (default {DEFAULT_DICE}, {KIT})"
    )
    p.add_argument(
        "--keep-fraction",
        type=float,
        default=KEEP_FRACTION,
        help=f"RAG relevance prefilter, fraction of the best score (default {KEEP_FRACTION}, {KIT})",
    )
    p.add_argument("--divergence", default="js", choices=("js", "kl"), help=f"SUMMatrix divergence (default js, {PUB})")
    p.add_argument("--seed", type=int, default=None, help="random seed, required by base-rand")
    p.add_argument("--stemmer", default="light", help=f"light | identity | light-<lang> (default light, {KIT})")
    p.add_argument("--stopwords", default=None, help="stopword file replacing the bundled list")
    p.add_argument("--rules", default=None, help="lia-rag rewrite rule file (default: bundled rules of --lang)")
    p.add_argument("--title", action="store_true", help=f"first line of each text is its title (default off, {KIT})")
    p.add_argument("--cluster", action="store_true", help="read a directory of files as one cluster")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="divsum", description="Extractive summarization and summary evaluation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("summarize", help="write one summary per input text or cluster")
    _add_run_options(s)
    s.add_argument("--out", default="summaries", help="output directory (default summaries)")
    s.add_argument("--run", default="divsum", help="report name: <out>/<run>.report.json")
    s.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")

    e = sub.add_parser("evaluate", help="score candidate summaries with ROUGE and/or FRESA")
    e.add_argument("candidates", help="directory of candidate summaries (<name>.sum.txt or <name>.txt)")
    e.add_argument("references", nargs="?", default=None, help="reference directory: <name>.*.txt files or <name>/ subdirectories")
    e.add_argument("sources", nargs="?", default=None, help="source directory: <name>.txt or <name>/ cluster directories")
    e.add_argument("--rouge", action="store_true", help="ROUGE-1, ROUGE-2 (recall) and ROUGE-SU (P/R/F)")
    e.add_argument("--fresa", action="store_true", help="FRESA divergences against the source")
    e.add_argument("--lang", dest="language", default="pt")
    e.add_argument("--stemmer", default="light")
    e.add_argument("--gamma", type=float, default=DEFAULT_GAMMA, help=f"FRESA smoothing (default {DEFAULT_GAMMA}, {PUB})")
    e.add_argument("--beta", type=float, default=1.0, help=f"F-measure weight (default 1, {KIT})")
    e.add_argument("--max-gap", type=int, default=4, help=f"skip-bigram gap for ROUGE-SU (default 4, {KIT})")
    e.add_argument("--out", default=".", help="report directory")
    e.add_argument("--run", default="divsum-eval", help="report name")

    g = sub.add_parser("inspect-graph", help="print the sentence graph of one input as DOT")
    _add_run_options(g)
    m = sub.add_parser("inspect-matrix", help="print the divergence matrices of a cluster fold as CSV")
    _add_run_options(m)
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    names = {f for f in RunConfig.__dataclass_fields__}
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in names})


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.command == "summarize":
            report = run_summarize(_config(ns), ns.jobs)
            print(f"wrote {len(report['summaries'])} summaries to {ns.out}")
        elif ns.command == "evaluate":
            report = run_evaluate(
                ns.candidates, ns.references, ns.sources, ns.rouge, ns.fresa, ns.language, ns.stemmer,
                ns.gamma, ns.beta, ns.max_gap, ns.out, ns.run,
            )  # fmt: skip
            print(f"evaluated {len(report.rows)} candidates; report in {Path(ns.out) / (ns.run + '.report.json')}")
        elif ns.command == "inspect-graph":
            sys.stdout.write(inspect_graph(_config(ns)))
        else:
            sys.stdout.write(inspect_matrix(_config(ns)))
    except ConfigurationError as exc:
        print(f"divsum: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CorpusError as exc:
        print(f"divsum: corpus error: {exc}", file=sys.stderr)
        return EXIT_CORPUS
    except (DegenerateInputError, UndefinedMetricError) as exc:
        print(f"divsum: degenerate input: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
