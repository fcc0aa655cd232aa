"""Command-line surface: simulate, backtest, logopt, compare, check.

Model-free commands (``backtest``) expose only the per-path constructions
(hindsight and universal legs); the log-optimal legs need a model, so
``logopt``, ``compare`` and ``check`` take a model descriptor.  Outputs are
deterministic given the config and are written atomically (temp file +
rename).
"""

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import (
    check_cover_gap,
    check_martingale_clt_premise,
    check_supermartingale,
    compare_three,
    l_num_quadrature,
    l_pi_diffusion,
)
from .errors import GrowthLabError, NonPositivePrice, ParseError, TooFewAssets
from .markets import euler_kernel, invariant_sample, simulate_diffusion, wright_fisher
from .optimize import best_constant, best_lipschitz, log_optimal_map, numeraire_map
from .portfolios import generator, fg_map, market_map, sample_mixture
from .simplex import (
    MarketPath,
    RefiningPartition,
    SimplexPoint,
    path_to_csv,
    quadratic_variation,
)
from .wealth import (
    wealth_diffusion_exponential,
    wealth_discrete,
    wealth_master_equation,
    wealth_universal,
)


@dataclass(frozen=True)
class PriceSeries:
    """Raw asset prices by date: strictly positive, rectangular, >= 2 assets."""

    dates: list
    names: list
    prices: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.prices, dtype=float)
        if p.ndim != 2 or p.shape[0] < 2 or p.shape[1] < 2:
            raise TooFewAssets("need >= 2 rows and >= 2 assets")
        if np.any(p <= 0):
            raise NonPositivePrice("prices must be strictly positive")
        object.__setattr__(self, "prices", p)


def ingest_prices(csv_path):
    """Read a prices CSV (header ``date,<name1>,...``) into weights.

    The only transformation is normalization by the cross-sectional total:
    weight_i = price_i / sum_j price_j.
    """
    dates, rows = [], []
    with open(csv_path) as fh:
        header = fh.readline().strip()
        cols = header.split(",")
        if len(cols) < 3:
            raise TooFewAssets(f"{csv_path}: need a date column and >= 2 assets")
        names = cols[1:]
        for ln, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != len(cols):
                raise ParseError(f"{csv_path}:{ln}: expected {len(cols)} columns, got {len(parts)}")
            try:
                vals = [float(v) for v in parts[1:]]
            except ValueError as e:
                raise ParseError(f"{csv_path}:{ln}: {e}") from None
            if any(v <= 0 for v in vals):
                raise NonPositivePrice(f"{csv_path}:{ln}: nonpositive price")
            dates.append(parts[0])
            rows.append(vals)
    series = PriceSeries(dates, names, np.array(rows))
    weights = series.prices / series.prices.sum(axis=1, keepdims=True)
    path = MarketPath("discrete", np.arange(len(rows), dtype=float), weights)
    return series, path


@dataclass
class RunConfig:
    """Mirror of the config JSON accepted by every subcommand."""

    model: dict = field(default_factory=lambda: {
        "model": "wright_fisher", "d": 2, "kappa": 1.5, "sigma2": 1.0,
        "theta": [0.5, 0.5]})
    prices_csv: str | None = None
    M: float = 5.0
    alpha: float = 0.1
    h: float = 1 / 32
    eps: float = 1e-3
    n_atoms: int = 1000
    m_ladder: list = field(default_factory=lambda: [1, 2, 4, 8])
    T: float = 100_000
    dt: float = 0.01
    seed: int = 1
    n_state: int = 20_000
    n_inv: int = 20_000
    out: str = "."

    @classmethod
    def load(cls, path_or_none, overrides):
        cfg = cls()
        if path_or_none:
            if not os.path.exists(path_or_none):
                raise ParseError(f"config file {path_or_none} does not exist")
            with open(path_or_none) as fh:
                data = json.load(fh)
            for k, v in data.items():
                if not hasattr(cfg, k):
                    raise ParseError(f"unknown config key {k!r}")
                setattr(cfg, k, v)
        for k, v in overrides.items():
            if v is not None:
                setattr(cfg, k, v)
        if cfg.prices_csv and not os.path.exists(cfg.prices_csv):
            raise ParseError(f"prices csv {cfg.prices_csv} does not exist")
        return cfg

    def to_dict(self):
        return {
            "model": self.model, "prices_csv": self.prices_csv, "M": self.M,
            "alpha": self.alpha, "h": self.h, "eps": self.eps,
            "n_atoms": self.n_atoms, "m_ladder": self.m_ladder, "T": self.T,
            "dt": self.dt, "seed": self.seed, "n_state": self.n_state,
            "n_inv": self.n_inv,
        }

    def spec(self):
        m = self.model
        if m.get("model") != "wright_fisher":
            raise ParseError(f"unsupported model {m.get('model')!r}")
        return wright_fisher(m["kappa"], m["theta"], m["sigma2"])


def atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".growthlab_")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit_json(path, obj):
    atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_simulate(cfg: RunConfig, args):
    spec = cfg.spec()
    d = spec.dim
    mu0 = SimplexPoint(np.full(d, 1.0 / d))
    if args.discrete:
        kernel = euler_kernel(spec, cfg.dt)
        from .markets import simulate_discrete

        path = simulate_discrete(kernel, int(cfg.T), mu0, cfg.seed)
    else:
        path = simulate_diffusion(spec, cfg.T, cfg.dt, mu0, cfg.seed)
    out = os.path.join(cfg.out, args.output or "path.csv")
    tmp = out + ".part"
    path_to_csv(path, tmp)
    os.replace(tmp, out)
    print(out)
    return 0


def cmd_backtest(cfg: RunConfig, args):
    """Model-free per-path report: hindsight and universal legs only."""
    if not cfg.prices_csv:
        raise ParseError("backtest needs prices_csv in the config or --prices")
    _, path = ingest_prices(cfg.prices_csv)
    T = float(path.times[-1])
    const = best_constant(path)
    mixture = sample_mixture("constant", cfg.n_atoms, cfg.seed, d=path.d)
    uni = wealth_universal(path, mixture, mode="discrete")
    cover = check_cover_gap(path, mixture, const, eta=0.05)
    report = {
        "version": 1,
        "seed": cfg.seed,
        "model": None,
        "T": T,
        "rates": {
            "retro": {"constant": const.log_v / T},
            "universal": {"value": uni.final / T},
        },
        "checks": [
            {"name": "cover_gap", "statistic": cover["gap"],
             "tolerance": cover["bound"], "pass": cover["pass"]},
        ],
        "config": cfg.to_dict(),
    }
    rungs = {}
    for m in cfg.m_ladder:
        r = best_lipschitz(path, float(m), cfg.h, seed=cfg.seed)
        rungs[str(m)] = r.log_v / T
    report["rates"]["retro"]["ladder"] = rungs
    out = os.path.join(cfg.out, args.output or "backtest.json")
    _emit_json(out, report)
    from .wealth import wealth_to_csv

    curve_csv = os.path.join(cfg.out, "universal_wealth.csv")
    tmp = curve_csv + ".part"
    wealth_to_csv(uni, tmp)
    os.replace(tmp, curve_csv)
    if args.emit_atoms:
        atoms_csv = os.path.join(cfg.out, "atom_wealth.csv")
        logs = uni.meta["atom_final_logs"]
        atomic_write(atoms_csv, "atom,log_V\n" + "".join(
            f"{i},{repr(float(v))}\n" for i, v in enumerate(logs)))
    print(out)
    return 0


def cmd_logopt(cfg: RunConfig, args):
    spec = cfg.spec()
    kernel = euler_kernel(spec, cfg.dt)
    table = log_optimal_map(kernel, cfg.h, cfg.n_state, cfg.eps, cfg.seed)
    d = spec.dim
    out = os.path.join(cfg.out, args.output or "logopt.csv")
    header = (",".join(f"x{i + 1}" for i in range(d)) + ","
              + ",".join(f"p{i + 1}" for i in range(d)) + ",L")
    lines = [header]
    for x, p, L in zip(table.states, table.p_hat, table.L):
        lines.append(",".join([repr(float(v)) for v in x]
                              + [repr(float(v)) for v in p] + [repr(float(L))]))
    atomic_write(out, "\n".join(lines) + "\n")
    _emit_json(out.replace(".csv", "_summary.json"), {
        "n": table.n, "eps": table.eps, "h": cfg.h, "solver": table.solver,
        "model": dict(spec.descriptor), "seed": cfg.seed,
    })
    print(out)
    return 0


def cmd_compare(cfg: RunConfig, args):
    spec = cfg.spec()
    report = compare_three(
        spec, T=int(cfg.T), dt=cfg.dt, seed=cfg.seed, M=cfg.M,
        resolution=cfg.h, eps=cfg.eps, n_atoms=cfg.n_atoms,
        m_ladder=tuple(cfg.m_ladder), n_state=cfg.n_state, n_inv=cfg.n_inv,
        emit_partials=True,
    )
    report.config["full"] = cfg.to_dict()
    out = os.path.join(cfg.out, args.output or "compare.json")
    atomic_write(out, report.to_json() + "\n")
    partials = report.rates["logopt"].get("partials", [])
    plot_csv = out.replace(".json", "_partials.csv")
    atomic_write(plot_csv, "T,partial_average\n" + "".join(
        f"{repr(t)},{repr(v)}\n" for t, v in partials))
    print(out)
    return 0


def cmd_check(cfg: RunConfig, args):
    """Fast theorem-check battery on the default benchmark model."""
    spec = cfg.spec()
    d = spec.dim
    mu0 = SimplexPoint(np.full(d, 1.0 / d))
    checks = []

    def add(name, statistic, tolerance, ok):
        checks.append({"name": name, "statistic": float(statistic),
                       "tolerance": float(tolerance), "pass": bool(ok)})
        flag = "PASS" if ok else "FAIL"
        print(f"{flag} {name}: statistic={statistic:.6g} tolerance={tolerance:.6g}")

    # market-map neutrality in all three engines
    worst = 0.0
    for s in range(3):
        path = simulate_diffusion(spec, 1.0, 1e-3, mu0, cfg.seed + s)
        mm = market_map(d)
        worst = max(worst, abs(wealth_discrete(path, mm).final))
        worst = max(worst, abs(wealth_diffusion_exponential(path, mm, spec).final))
        pq = quadratic_variation(path, RefiningPartition(1e-3, 0))
        worst = max(worst, abs(wealth_master_equation(pq, mm.G).final))
    add("numeraire_neutrality", worst, 1e-9, worst <= 1e-9)

    # generated-map identities
    rng = np.random.default_rng(cfg.seed)
    X = rng.dirichlet(np.ones(d), size=200)
    geo = generator("power_product", np.full(d, 1.0 / d), dim=d, M=16.0)
    from .portfolios import fg_weights_batch

    w = fg_weights_batch(geo, X)
    dev = np.abs(w - 1.0 / d).max()
    add("fg_geometric_mean_uniform", dev, 1e-12, dev <= 1e-12)

    # quadrature identity between the two stationary estimators
    inv = invariant_sample(spec, 4000, 1000, 20, cfg.seed + 7, dt=cfg.dt)
    lnum, _ = l_num_quadrature(spec, inv)
    rec = l_pi_diffusion(numeraire_map(spec), spec, inv)
    diff = abs(lnum - rec["L"])
    add("numeraire_quadrature_identity", diff, 1e-10, diff <= 1e-10)

    # supermartingale battery (reduced size)
    kernel = euler_kernel(spec, cfg.dt)
    mixture = sample_mixture("constant", 50, cfg.seed + 8, d=d)
    sup = check_supermartingale(kernel, mixture=mixture, t=5, n_paths=20_000,
                                n_states=5, n_inner=5_000, seed=cfg.seed + 9)
    add("one_step_numeraire_dominance", sup["one_step"]["statistic"],
        sup["one_step"]["tolerance"], sup["pass"])

    # cover gap on the half/double market
    from .benchmarks import alternating_path

    path = alternating_path(2000)
    mix = sample_mixture("constant", 200, cfg.seed + 10, d=2)
    const = best_constant(path)
    cover = check_cover_gap(path, mix, const, eta=0.05)
    add("cover_gap", cover["gap"], cover["bound"], cover["pass"])

    # bracket growth of the martingale part (bounded-integrand generated map;
    # the numeraire integrand is heavy-tailed and needs long horizons)
    path = simulate_diffusion(spec, 500.0, 1e-3, mu0, cfg.seed + 11)
    quad = generator("quadratic", [2.0, 1.0], dim=d)
    clt = check_martingale_clt_premise(path, fg_map(quad), spec)
    add("bracket_linear_growth", clt["last_rel_change"], 0.05, clt["pass"])

    report = {
        "version": 1,
        "seed": cfg.seed,
        "model": dict(spec.descriptor),
        "checks": checks,
        "config": cfg.to_dict(),
    }
    out = os.path.join(cfg.out, args.output or "check.json")
    _emit_json(out, report)
    print(out)
    return 0 if all(c["pass"] for c in checks) else 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="growthlab",
        description="Universal, hindsight and log-optimal portfolio experiments "
                    "on simulated or observed market weights.",
        epilog="GROWTHLAB_THREADS caps worker threads (default 1); results are "
               "bitwise identical for any thread count.",
    )
    ap.add_argument("--config", help="JSON config file mirroring RunConfig")
    ap.add_argument("--seed", type=int, help="override the config seed")
    ap.add_argument("--out", help="output directory (default .)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a weights path, emit CSV")
    p.add_argument("--discrete", action="store_true",
                   help="emit the Euler chain instead of the sampled diffusion")
    p.add_argument("--output")

    p = sub.add_parser("backtest", help="model-free hindsight/universal report from a prices CSV")
    p.add_argument("--prices", help="prices CSV (date,<names...>)")
    p.add_argument("--emit-atoms", action="store_true",
                   help="also write per-atom final log wealth")
    p.add_argument("--output")

    p = sub.add_parser("logopt", help="tabulate the per-state log-optimal map")
    p.add_argument("--output")

    p = sub.add_parser("compare", help="three-way growth-rate comparison report")
    p.add_argument("--output")

    p = sub.add_parser("check", help="theorem-check battery; exit 0 iff all pass")
    p.add_argument("--output")

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        overrides = {"seed": args.seed, "out": args.out}
        if getattr(args, "prices", None):
            overrides["prices_csv"] = args.prices
        cfg = RunConfig.load(args.config, overrides)
        os.makedirs(cfg.out, exist_ok=True)
        handler = {
            "simulate": cmd_simulate,
            "backtest": cmd_backtest,
            "logopt": cmd_logopt,
            "compare": cmd_compare,
            "check": cmd_check,
        }[args.command]
        return handler(cfg, args)
    except GrowthLabError as e:
        sys.stderr.write(json.dumps(
            {"error": {"type": type(e).__name__, "message": str(e)}}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
