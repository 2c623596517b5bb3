"""Monte Carlo harness benchmarking the estimators on synthetic Weibull data.

For every grid cell (n, p, k*) the harness draws ``replicates`` samples from
Weibull(k*, 1), censors them at the threshold giving uncensored proportion p
(p = 1 means complete data), fits the requested methods, and accumulates the
shape-estimate bias, MSE, and the KL divergence from the generating model to
each fitted model.

Determinism: every replicate slot owns a substream seeded by
(master_seed, cell_index, replicate_index), so results are byte-identical no
matter how cells are distributed over workers. Samples with fewer than
``min_uncensored`` events are rejected and redrawn from the same substream
(the rejected draws are counted), so every cell averages exactly
``replicates`` fits.
"""

import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .distribution import (
    CensoredSample,
    WeibullParams,
    apply_censoring,
    censor_threshold_for_p,
    sample,
)
from .divergence import kl_censored, kl_complete
from .errors import EstimationError
from .estimators import fit_mlc, fit_ml, mmle_from_ml, ross_from_ml

__all__ = ["SimulationConfig", "CellResult", "SimulationReport", "run_cell", "run", "CSV_HEADER"]

_KNOWN_METHODS = ("ML", "ROSS", "MLC", "MMLE")

CSV_HEADER = "n,p,k_star,method,bias,mse,mean_kl,used_replicates,discarded,failed_fits"


@dataclass(frozen=True)
class SimulationConfig:
    """Grid and execution parameters for a simulation run (scale fixed at 1)."""

    n_values: tuple[int, ...]
    k_star_values: tuple[float, ...]
    p_values: tuple[float, ...]
    replicates: int
    master_seed: int
    methods: tuple[str, ...] = ("ML", "MLC", "MMLE")
    min_uncensored: int = 2

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "k_star_values", tuple(float(k) for k in self.k_star_values))
        object.__setattr__(self, "p_values", tuple(float(p) for p in self.p_values))
        object.__setattr__(self, "methods", tuple(self.methods))
        if not self.n_values or not self.k_star_values or not self.p_values:
            raise ValueError("all parameter grids must be non-empty")
        if any(n < 2 for n in self.n_values):
            raise ValueError("sample sizes must be >= 2")
        if any(k <= 0 for k in self.k_star_values):
            raise ValueError("shape values must be positive")
        if any(not 0.0 < p <= 1.0 for p in self.p_values):
            raise ValueError("p values must lie in (0, 1] (1 = complete data)")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        unknown = [m for m in self.methods if m not in _KNOWN_METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; choose from {_KNOWN_METHODS}")
        if "ROSS" in self.methods and any(p < 1.0 for p in self.p_values):
            raise ValueError("ROSS supports complete data only; remove it or set all p = 1")
        if self.min_uncensored < 1:
            raise ValueError("min_uncensored must be >= 1")

    def cells(self):
        """Cell grid in deterministic order, with stable indices for seeding."""
        return list(enumerate(product(self.n_values, self.p_values, self.k_star_values)))

    @classmethod
    def paper_complete(cls, replicates: int = 100_000, master_seed: int = 0,
                       methods=("ML", "MLC", "MMLE")) -> "SimulationConfig":
        """Complete-data benchmark grid: n in {10,20,50}, k* in {0.5,1,5,10}."""
        return cls((10, 20, 50), (0.5, 1.0, 5.0, 10.0), (1.0,), replicates, master_seed, methods)

    @classmethod
    def paper_censored(cls, replicates: int = 100_000, master_seed: int = 0,
                       methods=("ML", "MLC", "MMLE")) -> "SimulationConfig":
        """Censored benchmark grid: n in {10,20,30}, p in {0.3..0.9}, k* in {0.5..10}."""
        return cls((10, 20, 30), (0.5, 1.0, 5.0, 10.0), (0.3, 0.5, 0.7, 0.9), replicates, master_seed, methods)


@dataclass(frozen=True)
class CellResult:
    """Per-(cell, method) aggregates over the used replicates."""

    n: int
    p: float
    k_star: float
    method: str
    bias: float
    mse: float
    mean_kl: float
    used_replicates: int
    discarded: int
    failed_fits: int
    m4: float = field(default=float("nan"), compare=False)  # 4th moment of k error (diagnostics)

    @property
    def se_bias(self) -> float:
        """Monte Carlo standard error of the bias estimate."""
        var = max(self.mse - self.bias**2, 0.0)
        return float(np.sqrt(var / max(self.used_replicates - self.failed_fits, 1)))

    @property
    def se_mse(self) -> float:
        """Monte Carlo standard error of the MSE estimate."""
        var = max(self.m4 - self.mse**2, 0.0)
        return float(np.sqrt(var / max(self.used_replicates - self.failed_fits, 1)))


@dataclass(frozen=True)
class SimulationReport:
    """All cell results plus the policy metadata needed to interpret them."""

    config: SimulationConfig
    cells: tuple[CellResult, ...]
    discard_policy: str = "resample"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for c in self.cells:
            buf.write(
                f"{c.n},{c.p:.6g},{c.k_star:.6g},{c.method},{c.bias:.6g},{c.mse:.6g},"
                f"{c.mean_kl:.6g},{c.used_replicates},{c.discarded},{c.failed_fits}\n"
            )
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())

    def cell(self, n: int, p: float, k_star: float, method: str) -> CellResult:
        for c in self.cells:
            if c.n == n and c.p == p and c.k_star == k_star and c.method == method:
                return c
        raise KeyError(f"no cell ({n}, {p}, {k_star}, {method})")


def _fit_method(method: str, s: CensoredSample, ml_report):
    if method == "ML":
        return ml_report
    if method == "MMLE":
        return mmle_from_ml(s, ml_report)
    if method == "MLC":
        return fit_mlc(s)
    if method == "ROSS":
        return ross_from_ml(s, ml_report)
    raise ValueError(method)


def run_cell(config: SimulationConfig, n: int, p: float, k_star: float,
             cell_index: int) -> list[CellResult]:
    """Simulate one (n, p, k*) cell; returns one CellResult per method."""
    generator = WeibullParams(k_star, 1.0)
    complete = p >= 1.0
    c = None if complete else censor_threshold_for_p(generator, p)

    sums = {m: np.zeros(4) for m in config.methods}   # err, err^2, kl, err^4
    counts = {m: 0 for m in config.methods}
    fails = {m: 0 for m in config.methods}
    discarded = 0
    need_ml = any(m in config.methods for m in ("ML", "MMLE", "ROSS"))

    for rep in range(config.replicates):
        rng = np.random.Generator(np.random.PCG64(
            np.random.SeedSequence((config.master_seed, cell_index, rep))))
        while True:
            s = sample(generator, n, rng)
            if not complete:
                s = apply_censoring(s, c)
                if s.d < config.min_uncensored:
                    discarded += 1
                    continue
            break

        ml_report = None
        if need_ml:
            try:
                ml_report = fit_ml(s)
            except EstimationError:
                ml_report = None

        for method in config.methods:
            try:
                if method in ("ML", "MMLE", "ROSS") and ml_report is None:
                    raise EstimationError("ML fit failed")
                fitted = _fit_method(method, s, ml_report)
                kl = (kl_complete(generator, fitted.params) if complete
                      else kl_censored(generator, fitted.params, c))
            except (EstimationError, OverflowError, ArithmeticError):
                fails[method] += 1
                continue
            err = fitted.params.shape_k - k_star
            sums[method] += (err, err * err, kl, err**4)
            counts[method] += 1

    out = []
    for method in config.methods:
        m = counts[method]
        stats = sums[method] / m if m > 0 else np.full(4, np.nan)  # all fits failed
        out.append(CellResult(
            n=n, p=p, k_star=k_star, method=method,
            bias=float(stats[0]), mse=float(stats[1]), mean_kl=float(stats[2]),
            used_replicates=config.replicates, discarded=discarded, failed_fits=fails[method],
            m4=float(stats[3]),
        ))
    return out


def _run_cell_task(args):
    config, n, p, k_star, idx = args
    return run_cell(config, n, p, k_star, idx)


def run(config: SimulationConfig, workers: int = 1) -> SimulationReport:
    """Run the full grid; identical output for any worker count."""
    tasks = [(config, n, p, k_star, idx) for idx, (n, p, k_star) in config.cells()]
    if workers <= 1:
        results = [_run_cell_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell_task, tasks))
    cells = tuple(c for cell_list in results for c in cell_list)
    return SimulationReport(config=config, cells=cells)
