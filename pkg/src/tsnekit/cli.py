"""End-to-end pipeline orchestration and the ``tsnekit`` command line.

Subcommands: ingest, featurize, embed, sweep, eval, plot. The embed pipeline
runs ingest -> featurize -> kernel -> init -> optimize -> evaluate -> report
and leaves a self-describing run directory behind: every run writes back its
fully resolved configuration (flat key=value text plus a JSON manifest), so
any result can be reproduced from its own outputs.

Exit codes: 0 success, 2 usage/config error, 3 runtime/numeric error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import warnings
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import engine, evaluate, featurize, ingest, kernels, svgplot
from . import initialization as init_mod
from .errors import (
    FormatError,
    ParseError,
    TsnekitError,
    ValidationError,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3

FORMATS = ("fasta", "csv", "points")
HD_SPACES = ("features", "kernel")
ENSEMBLE_MODES = ("aligned", "raw")

_USAGE_ERRORS = (
    ValueError,
    FormatError,
    ParseError,
    ValidationError,
    FileNotFoundError,
    IsADirectoryError,
    NotADirectoryError,
)


@dataclass
class RunConfig:
    """Fully resolved parameters of one pipeline run."""

    data: str
    format: str = "fasta"
    kmer_k: int = 3
    kernel: str = "gaussian"
    perplexity: float = 30.0
    sigma: float | None = None
    psi: int = 16
    trees: int = 200
    init: str = "pca"
    iters: int = 2000
    checkpoint_every: int = 100
    lr: float = 200.0
    momentum_early: float = 0.5
    momentum_late: float = 0.8
    momentum_switch: int = 250
    exaggeration: float = 1.0
    exaggeration_iters: int = 250
    kmax: int = 99
    seed: int = 0
    kernel_seed: int | None = None
    out: str = "tsnekit-run"
    joint_mode: str = "row-normalize"
    hd_space: str = "features"
    ensemble_mode: str = "aligned"
    jobs: int = 1

    @property
    def effective_kernel_seed(self) -> int:
        return self.seed if self.kernel_seed is None else self.kernel_seed

    def validate(self) -> None:
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        if self.kernel not in kernels.KERNEL_KINDS:
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if self.init not in init_mod.INIT_KINDS:
            raise ValueError(f"unknown init {self.init!r}")
        if self.joint_mode not in kernels.JOINT_MODES:
            raise ValueError(f"unknown joint mode {self.joint_mode!r}")
        if self.hd_space not in HD_SPACES:
            raise ValueError(f"unknown hd space {self.hd_space!r}")
        if self.ensemble_mode not in ENSEMBLE_MODES:
            raise ValueError(f"unknown ensemble mode {self.ensemble_mode!r}")
        if self.hd_space == "kernel" and self.kernel == "gaussian":
            raise ValueError(
                "hd-space 'kernel' needs an explicit kernel matrix; the "
                "gaussian path produces P directly (use hd-space 'features')"
            )
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.kmax < 1:
            raise ValueError("kmax must be >= 1")

    def to_mapping(self) -> dict:
        out = {}
        for f in fields(self):
            out[f.name] = getattr(self, f.name)
        return out

    @classmethod
    def from_mapping(cls, mapping: dict) -> "RunConfig":
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, value in mapping.items():
            name = key.replace("-", "_")
            if name not in known:
                raise ValueError(f"unknown config key {key!r}")
            kwargs[name] = _coerce(value, known[name].name)
        if "data" not in kwargs:
            raise ValueError("config is missing the required 'data' key")
        return cls(**kwargs)


_INT_KEYS = {
    "kmer_k", "psi", "trees", "iters", "checkpoint_every", "momentum_switch",
    "exaggeration_iters", "kmax", "seed", "kernel_seed", "jobs",
}
_FLOAT_KEYS = {
    "perplexity", "sigma", "lr", "momentum_early", "momentum_late", "exaggeration",
}


def _coerce(value, name: str):
    if value is None or not isinstance(value, str):
        return value
    if name in _INT_KEYS:
        return None if value.lower() == "none" else int(value)
    if name in _FLOAT_KEYS:
        return None if value.lower() == "none" else float(value)
    return value


def parse_config_file(path) -> dict:
    """Flat ``key=value`` config text -> raw string mapping."""
    mapping = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        mapping[key.strip()] = value.strip()
    return mapping


def write_config_file(config: RunConfig) -> str:
    lines = []
    for key, value in config.to_mapping().items():
        lines.append(f"{key}={'none' if value is None else value}")
    return "\n".join(lines) + "\n"


class StageFailure(Exception):
    """Pipeline error annotated with the stage it occurred in."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause

    @property
    def exit_code(self) -> int:
        return EXIT_USAGE if isinstance(self.cause, _USAGE_ERRORS) else EXIT_RUNTIME


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageFailure:
        raise
    except Exception as exc:
        raise StageFailure(name, exc) from exc


# ---------------------------------------------------------------------------
# pipeline stages
# ---------------------------------------------------------------------------

def _load_dataset(config: RunConfig):
    """Returns (ids, labels, points_or_None, records_or_None)."""
    path = Path(config.data)
    if not path.is_file():
        raise FileNotFoundError(f"dataset file not found: {path}")
    if config.format == "fasta":
        records = ingest.parse_fasta(path.read_bytes())
        return [r.id for r in records], [r.label for r in records], None, records
    if config.format == "csv":
        records = ingest.parse_labeled_csv(path.read_bytes())
        return [r.id for r in records], [r.label for r in records], None, records
    dataset = ingest.read_points_csv(path.read_bytes())
    return dataset.ids, dataset.labels, dataset.points, None


def _featurize(config: RunConfig, points, records):
    if points is not None:
        return points, None
    alphabet = featurize.infer_alphabet(records)
    X = featurize.build_feature_matrix(records, config.kmer_k, alphabet)
    return X, alphabet


def _cache_key(config: RunConfig) -> str:
    digest = hashlib.sha256()
    digest.update(Path(config.data).read_bytes())
    parts = [config.format, config.kernel, config.joint_mode]
    if config.format != "points":
        parts.append(f"k={config.kmer_k}")
    if config.kernel == "gaussian":
        parts.append(f"perplexity={config.perplexity!r}")
    elif config.kernel == "laplacian":
        parts.append(f"sigma={config.sigma!r}")
    elif config.kernel == "isolation":
        parts.append(
            f"psi={config.psi},t={config.trees},seed={config.effective_kernel_seed}"
        )
    digest.update("|".join(parts).encode())
    return digest.hexdigest()[:32]


def _atomic_dump(path: Path, matrix: np.ndarray) -> None:
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    kernels.dump_matrix(tmp, matrix)
    os.replace(tmp, path)


def _compute_joint(config: RunConfig, X, records, cache_dir):
    """Returns (P, K_values_or_None, resolved_params)."""
    resolved = {}
    p_path = k_path = None
    if cache_dir is not None:
        cache_dir = Path(cache_dir)
        cache_dir.mkdir(parents=True, exist_ok=True)
        key = _cache_key(config)
        p_path = cache_dir / f"{key}.P.mat"
        k_path = cache_dir / f"{key}.K.mat"
        if p_path.is_file() and (config.kernel == "gaussian" or k_path.is_file()):
            P = kernels.load_matrix(p_path)
            K = None if config.kernel == "gaussian" else kernels.load_matrix(k_path)
            return P, K, {"cache": "hit"}

    if config.kernel == "gaussian":
        P = kernels.gaussian_joint(X, config.perplexity)
        K = None
    else:
        if config.kernel == "isolation":
            kern = kernels.isolation_kernel(
                X,
                psi=config.psi,
                t=config.trees,
                seed=config.effective_kernel_seed,
                jobs=config.jobs,
            )
        elif config.kernel == "laplacian":
            sigma = config.sigma
            if sigma is None:
                sigma = kernels.default_laplacian_sigma(X)
            resolved["sigma"] = sigma
            kern = kernels.laplacian_kernel(X, sigma)
        else:  # approximate
            if records is None:
                raise ValueError(
                    "the approximate kernel works on sequences; point-set "
                    "input has no k-mer spectra"
                )
            kern = kernels.approximate_kernel(records, k=config.kmer_k)
        K = kern.values
        P = kernels.kernel_to_joint(kern, mode=config.joint_mode)

    if p_path is not None:
        _atomic_dump(p_path, P)
        if K is not None:
            _atomic_dump(k_path, K)
    return P, K, resolved


def _kernel_space_distances(K: np.ndarray) -> np.ndarray:
    """Kernel-induced metric d^2(i,j) = K_ii + K_jj - 2 K_ij."""
    diag = np.diag(K)
    d2 = diag[:, None] + diag[None, :] - 2.0 * K
    np.maximum(d2, 0.0, out=d2)
    return d2


def cmd_embed(config: RunConfig, cache_dir=None) -> Path:
    """Run the whole pipeline; returns the run directory."""
    _stage("config", config.validate)
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    failed_marker = out_dir / "FAILED"
    if failed_marker.exists():
        failed_marker.unlink()

    try:
        ids, labels, points, records = _stage("ingest", _load_dataset, config)
        X, alphabet = _stage("featurize", _featurize, config, points, records)
        P, K, resolved = _stage("kernels", _compute_joint, config, X, records, cache_dir)

        caught: list[str] = []
        with warnings.catch_warnings(record=True) as wlist:
            warnings.simplefilter("always")
            embedding = _stage(
                "init",
                init_mod.make_initial_embedding,
                X,
                config.init,
                config.seed,
                ensemble_mode=config.ensemble_mode,
            )
            caught.extend(str(w.message) for w in wlist)
        (out_dir / "initial_embedding.csv").write_text(
            init_mod.write_embedding_csv(embedding, ids)
        )

        params = engine.OptimizerParams(
            learning_rate=config.lr,
            momentum_early=config.momentum_early,
            momentum_late=config.momentum_late,
            momentum_switch_iter=config.momentum_switch,
            max_iters=config.iters,
            checkpoint_every=config.checkpoint_every,
            early_exaggeration_factor=config.exaggeration,
            early_exaggeration_iters=config.exaggeration_iters,
        )
        trajectory = _stage("engine", engine.run_tsne, P, embedding, params, config.seed)
        for cp in trajectory.checkpoints:
            (out_dir / f"checkpoint_{cp.iteration:06d}.csv").write_text(
                engine.write_checkpoint_csv(cp.embedding, ids, labels)
            )

        aucs = _stage("eval", _evaluate_trajectory, config, X, K, trajectory, out_dir)

        final = trajectory.final
        (out_dir / "final_embedding.svg").write_text(
            svgplot.scatter_svg(
                final.embedding.coords,
                labels,
                title=f"{config.kernel} kernel, {config.init} init, "
                f"iteration {final.iteration}",
            )
        )
        manifest = {
            "config": config.to_mapping(),
            "resolved": resolved,
            "n_points": len(ids),
            "feature_dim": int(X.shape[1]),
            "alphabet": "".join(alphabet.symbols) if alphabet is not None else None,
            "init_provenance": embedding.provenance,
            "checkpoints": [
                {"iteration": cp.iteration, "kl": cp.kl, "auc_rnx": auc}
                for cp, auc in zip(trajectory.checkpoints, aucs)
            ],
            "warnings": caught,
        }
        (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
        (out_dir / "config.resolved").write_text(write_config_file(config))
        return out_dir
    except StageFailure as failure:
        failed_marker.write_text(f"{failure.stage}: {failure.cause}\n")
        raise


def _evaluate_trajectory(config: RunConfig, X, K, trajectory, out_dir: Path):
    if config.hd_space == "kernel":
        hd_table = evaluate.knn_table_from_distances(
            _kernel_space_distances(K), config.kmax
        )
    else:
        hd_table = evaluate.knn_table(X, config.kmax)
    aucs = []
    for cp in trajectory.checkpoints:
        ld_table = evaluate.knn_table(cp.embedding.coords, config.kmax)
        curve = evaluate.quality_curve_from_tables(hd_table, ld_table, config.kmax)
        (out_dir / f"quality_{cp.iteration:06d}.csv").write_text(
            evaluate.write_quality_csv(curve)
        )
        aucs.append(curve.auc_rnx)
    (out_dir / "auc_vs_iteration.csv").write_text(
        evaluate.write_auc_series_csv(trajectory.iterations(), aucs)
    )
    return aucs


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

@dataclass
class SweepRow:
    kernel: str
    init: str
    status: str          # "ok" or "FAILED(<stage>)"
    final_auc: float | None
    best_auc: float | None
    iters_to_95pct: int | None


@dataclass
class SweepReport:
    rows: list[SweepRow]


def cell_seed(base_seed: int, kernel: str, init: str) -> int:
    """Stable per-cell seed: base plus a CRC of the cell name."""
    return base_seed + zlib.crc32(f"{kernel}:{init}".encode()) % 1_000_000


def _run_cell(config: RunConfig, kernel: str, init: str, out_root: Path) -> SweepRow:
    cfg = replace(
        config,
        kernel=kernel,
        init=init,
        seed=cell_seed(config.seed, kernel, init),
        kernel_seed=config.seed + zlib.crc32(kernel.encode()) % 1_000_000,
        out=str(out_root / "cells" / f"{kernel}__{init}"),
    )
    try:
        run_dir = cmd_embed(cfg, cache_dir=out_root / "cache")
    except StageFailure as failure:
        return SweepRow(kernel, init, f"FAILED({failure.stage})", None, None, None)
    manifest = json.loads((run_dir / "manifest.json").read_text())
    pairs = [(c["iteration"], c["auc_rnx"]) for c in manifest["checkpoints"]]
    final_auc = pairs[-1][1]
    best_auc = max(a for _, a in pairs)
    threshold = 0.95 * final_auc
    iters95 = next((it for it, a in pairs if a >= threshold), pairs[-1][0])
    return SweepRow(kernel, init, "ok", final_auc, best_auc, iters95)


def cmd_sweep(config: RunConfig, kernel_list, init_list) -> SweepReport:
    """Run every kernel x init cell; never aborts on a single cell failure."""
    if not kernel_list or not init_list:
        raise ValueError("kernel and init lists must be nonempty")
    for k in kernel_list:
        if k not in kernels.KERNEL_KINDS:
            raise ValueError(f"unknown kernel {k!r}")
    for i in init_list:
        if i not in init_mod.INIT_KINDS:
            raise ValueError(f"unknown init {i!r}")
    out_root = Path(config.out)
    out_root.mkdir(parents=True, exist_ok=True)

    cells = [(k, i) for k in kernel_list for i in init_list]
    # warm the kernel cache serially: one cell per kernel, so parallel cells
    # only ever read completed cache entries
    if config.jobs > 1:
        done: dict[tuple[str, str], SweepRow] = {}
        first_per_kernel = {}
        for k, i in cells:
            first_per_kernel.setdefault(k, (k, i))
        for cell in first_per_kernel.values():
            done[cell] = _run_cell(config, cell[0], cell[1], out_root)
        remaining = [c for c in cells if c not in done]
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            results = list(
                pool.map(lambda c: _run_cell(config, c[0], c[1], out_root), remaining)
            )
        done.update(dict(zip(remaining, results)))
        rows = [done[c] for c in cells]
    else:
        rows = [_run_cell(config, k, i, out_root) for k, i in cells]

    report = SweepReport(rows)
    (out_root / "sweep_report.csv").write_text(render_sweep_csv(report))
    (out_root / "sweep_report.txt").write_text(render_sweep_table(report))
    return report


def render_sweep_csv(report: SweepReport) -> str:
    lines = ["kernel,init,status,final_auc_rnx,best_auc_rnx,iters_to_95pct"]
    for r in report.rows:
        final = "" if r.final_auc is None else repr(float(r.final_auc))
        best = "" if r.best_auc is None else repr(float(r.best_auc))
        it95 = "" if r.iters_to_95pct is None else str(r.iters_to_95pct)
        lines.append(f"{r.kernel},{r.init},{r.status},{final},{best},{it95}")
    return "\n".join(lines) + "\n"


def render_sweep_table(report: SweepReport) -> str:
    """Cells ranked by final AUC_RNX with recommendation verdicts."""
    ok = [r for r in report.rows if r.status == "ok"]
    failed = [r for r in report.rows if r.status != "ok"]
    ranked = sorted(ok, key=lambda r: r.final_auc, reverse=True)
    verdicts = {}
    if ranked:
        best = ranked[0]
        worst_auc = ranked[-1].final_auc
        verdicts[(best.kernel, best.init)] = "recommended"
        for r in ranked[1:]:
            if r.final_auc <= worst_auc + 0.01:
                verdicts[(r.kernel, r.init)] = "not recommended"
    header = f"{'kernel':<12} {'init':<9} {'final_auc':>10} {'best_auc':>10} {'iters@95%':>10}  verdict"
    lines = [header, "-" * len(header)]
    for r in ranked:
        verdict = verdicts.get((r.kernel, r.init), "")
        lines.append(
            f"{r.kernel:<12} {r.init:<9} {r.final_auc:>10.4f} {r.best_auc:>10.4f} "
            f"{r.iters_to_95pct:>10d}  {verdict}"
        )
    for r in failed:
        lines.append(f"{r.kernel:<12} {r.init:<9} {r.status}")
    lines.append("")
    lines.append(
        "verdicts: 'recommended' = best final AUC_RNX; 'not recommended' = "
        "final AUC_RNX within 0.01 of the worst cell."
    )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# plot / eval helpers
# ---------------------------------------------------------------------------

def cmd_plot(run_dir, iterations=None) -> list[Path]:
    """Scatter SVG per checkpoint plus the AUC-vs-iteration chart."""
    run_dir = Path(run_dir)
    available = sorted(run_dir.glob("checkpoint_*.csv"))
    if not available:
        raise FileNotFoundError(f"no checkpoints found in {run_dir}")
    by_iter = {int(p.stem.split("_")[1]): p for p in available}
    wanted = sorted(by_iter) if iterations is None else list(iterations)
    written = []
    for it in wanted:
        if it not in by_iter:
            raise ValueError(f"checkpoint for iteration {it} not found in {run_dir}")
        _, coords, labels = engine.read_checkpoint_csv(by_iter[it].read_text())
        svg_path = run_dir / f"plot_{it:06d}.svg"
        svg_path.write_text(
            svgplot.scatter_svg(coords, labels, title=f"iteration {it}")
        )
        written.append(svg_path)
    auc_csv = run_dir / "auc_vs_iteration.csv"
    if auc_csv.is_file():
        its, aucs = [], []
        for line in auc_csv.read_text().splitlines()[1:]:
            it, auc = line.split(",")
            its.append(int(it))
            aucs.append(float(auc))
        chart = run_dir / "auc_curve.svg"
        chart.write_text(
            svgplot.line_chart_svg(
                its, aucs, x_label="iteration", y_label="AUC_RNX",
                title="neighborhood preservation vs iteration",
            )
        )
        written.append(chart)
    return written


def cmd_eval(data_path, embedding_path, k_max: int, out_path) -> evaluate.QualityCurve:
    """Quality curve between a stored point set and a stored embedding."""
    dataset = ingest.read_points_csv(Path(data_path).read_bytes())
    _, coords, _ = engine.read_checkpoint_csv(Path(embedding_path).read_text())
    curve = evaluate.quality_curve(dataset.points, coords, k_max)
    Path(out_path).write_text(evaluate.write_quality_csv(curve))
    return curve


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _pipeline_flags(parser: argparse.ArgumentParser) -> None:
    add = parser.add_argument
    add("--config", default=None, help="flat key=value config file")
    add("--data", default=None, help="dataset path (required unless in config)")
    add("--format", default=None, choices=FORMATS)
    add("--kmer-k", dest="kmer_k", type=int, default=None)
    add("--kernel", default=None, choices=kernels.KERNEL_KINDS)
    add("--perplexity", type=float, default=None)
    add("--sigma", type=float, default=None)
    add("--psi", type=int, default=None)
    add("--trees", type=int, default=None, help="isolation kernel rounds (t)")
    add("--init", default=None, choices=init_mod.INIT_KINDS)
    add("--iters", type=int, default=None)
    add("--checkpoint-every", dest="checkpoint_every", type=int, default=None)
    add("--lr", type=float, default=None)
    add("--momentum-early", dest="momentum_early", type=float, default=None)
    add("--momentum-late", dest="momentum_late", type=float, default=None)
    add("--exaggeration", type=float, default=None)
    add("--kmax", type=int, default=None)
    add("--seed", type=int, default=None)
    add("--out", default=None)
    add("--joint-mode", dest="joint_mode", default=None, choices=kernels.JOINT_MODES)
    add("--hd-space", dest="hd_space", default=None, choices=HD_SPACES)
    add("--ensemble-mode", dest="ensemble_mode", default=None, choices=ENSEMBLE_MODES)
    add("--jobs", type=int, default=None)


def _config_from_args(args) -> RunConfig:
    mapping: dict = {}
    if args.config:
        mapping.update(parse_config_file(args.config))
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            mapping[f.name] = value
    if "data" not in mapping:
        raise ValueError("--data is required (or provide it in --config)")
    return RunConfig.from_mapping(mapping)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsnekit",
        description="kernel- and initialization-pluggable t-SNE with "
        "neighborhood-preservation evaluation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="convert/generate datasets")
    p_ingest.add_argument("--data", default=None)
    p_ingest.add_argument("--format", default="fasta", choices=FORMATS)
    p_ingest.add_argument("--synthetic", default=None, choices=("circle",))
    p_ingest.add_argument("--n", type=int, default=1000)
    p_ingest.add_argument("--radius", type=float, default=1.0)
    p_ingest.add_argument("--noise-std", dest="noise_std", type=float, default=None)
    p_ingest.add_argument("--seed", type=int, default=0)
    p_ingest.add_argument("--out", required=True)

    p_feat = sub.add_parser("featurize", help="write k-mer spectra as a points CSV")
    p_feat.add_argument("--data", required=True)
    p_feat.add_argument("--format", default="fasta", choices=("fasta", "csv"))
    p_feat.add_argument("--kmer-k", dest="kmer_k", type=int, default=3)
    p_feat.add_argument("--out", required=True)

    p_embed = sub.add_parser("embed", help="run the full pipeline once")
    _pipeline_flags(p_embed)

    p_sweep = sub.add_parser("sweep", help="run a kernel x init grid")
    _pipeline_flags(p_sweep)
    p_sweep.add_argument(
        "--kernels", default=",".join(kernels.KERNEL_KINDS),
        help="comma-separated kernel list",
    )
    p_sweep.add_argument(
        "--inits", default=",".join(init_mod.INIT_KINDS),
        help="comma-separated init list",
    )

    p_eval = sub.add_parser("eval", help="quality curve for a stored embedding")
    p_eval.add_argument("--data", required=True, help="HD points CSV")
    p_eval.add_argument("--embedding", required=True, help="embedding CSV (id,x,y,label)")
    p_eval.add_argument("--kmax", type=int, default=99)
    p_eval.add_argument("--out", required=True)

    p_plot = sub.add_parser("plot", help="render SVGs for a run directory")
    p_plot.add_argument("--run", required=True)
    p_plot.add_argument(
        "--iterations", default=None,
        help="comma-separated checkpoint iterations (default: all)",
    )
    return parser


def _cmd_ingest(args) -> int:
    if args.synthetic == "circle":
        dataset = ingest.generate_circle(
            args.n, radius=args.radius, noise_std=args.noise_std, seed=args.seed
        )
        Path(args.out).write_text(ingest.write_points_csv(dataset))
        return EXIT_OK
    if not args.data:
        raise ValueError("ingest needs --data or --synthetic circle")
    raw = Path(args.data).read_bytes()
    if args.format == "fasta":
        records = ingest.parse_fasta(raw)
    elif args.format == "csv":
        records = ingest.parse_labeled_csv(raw)
    else:
        records = None
    if records is not None:
        Path(args.out).write_text(ingest.write_labeled_csv(records))
    else:
        dataset = ingest.read_points_csv(raw)
        Path(args.out).write_text(ingest.write_points_csv(dataset))
    return EXIT_OK


def _cmd_featurize(args) -> int:
    raw = Path(args.data).read_bytes()
    records = (
        ingest.parse_fasta(raw) if args.format == "fasta"
        else ingest.parse_labeled_csv(raw)
    )
    X = featurize.build_feature_matrix(records, args.kmer_k)
    dataset = ingest.PointDataset(
        points=X, labels=[r.label for r in records], ids=[r.id for r in records]
    )
    Path(args.out).write_text(ingest.write_points_csv(dataset))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "ingest":
            return _cmd_ingest(args)
        if args.command == "featurize":
            return _cmd_featurize(args)
        if args.command == "embed":
            cmd_embed(_config_from_args(args))
            return EXIT_OK
        if args.command == "sweep":
            config = _config_from_args(args)
            cmd_sweep(
                config,
                [k for k in args.kernels.split(",") if k],
                [i for i in args.inits.split(",") if i],
            )
            return EXIT_OK
        if args.command == "eval":
            cmd_eval(args.data, args.embedding, args.kmax, args.out)
            return EXIT_OK
        if args.command == "plot":
            iterations = None
            if args.iterations:
                iterations = [int(v) for v in args.iterations.split(",") if v]
            cmd_plot(args.run, iterations)
            return EXIT_OK
        raise ValueError(f"unknown command {args.command!r}")
    except StageFailure as failure:
        print(f"tsnekit: error in {failure}", file=sys.stderr)
        return failure.exit_code
    except _USAGE_ERRORS as exc:
        print(f"tsnekit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TsnekitError, ArithmeticError) as exc:
        print(f"tsnekit: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
