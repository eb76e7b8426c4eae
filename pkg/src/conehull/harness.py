"""Experiment configs, oracle joins and reports.

A config names an experiment kind and its parameters.  :func:`run` executes
it and returns a :class:`Report` whose rows pair each Monte Carlo estimate
with its closed-form oracle.  Statistical rows pass when ``|z| <= 4``;
deterministic rows pass on exact agreement.
"""

import csv
import io
import json
import math
import os
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy import stats

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import closed_forms as cf
from .conic import Cone, buchta_identity_check, conic_profile
from .constants import Z_THRESHOLD
from .diagnostics import sampler_battery
from .errors import ConeHullError, ConfigError
from .estimate import Estimate
from .functionals import (
    estimate_B,
    estimate_cone_section_limit,
    estimate_f_vector_poisson,
    estimate_intrinsic_volume,
    estimate_T,
    estimate_volume,
)
from .geometry import (
    convex_hull,
    euler_characteristic,
    f_vector,
    hull_volume,
    point_in_conv_lp,
    t_functional,
)
from .rng import make_rng, master_seed
from .samplers import PoissonParams, sample_cone, sample_poisson_hull, sample_symmetric_hull

REPORT_VERSION = 1

KINDS = (
    "poisson-f",
    "poisson-T",
    "poisson-volume",
    "intrinsic",
    "B-constant",
    "cone-limit",
    "conic-profile",
    "buchta",
    "symmetric-T",
    "sampler-tests",
    "identities",
    "infinity-branches",
)

_REQUIRED = {
    "poisson-f": ("d", "gamma"),
    "poisson-T": ("d", "gamma", "a", "b"),
    "poisson-volume": ("d", "gamma"),
    "intrinsic": ("d", "gamma", "k"),
    "B-constant": ("k", "d"),
    "cone-limit": ("d", "n_grid"),
    "conic-profile": ("d",),
    "buchta": ("d", "n", "k"),
    "symmetric-T": ("d", "gamma", "a", "b"),
    "sampler-tests": (),
    "identities": (),
    "infinity-branches": (),
}

_DEFAULTS = {
    "poisson-f": {"c": 1.0},
    "poisson-T": {"c": 1.0},
    "poisson-volume": {"c": 1.0},
    "intrinsic": {"c": 1.0, "dirs": 8},
    "B-constant": {"inner": 200, "proposal": "radial"},
    "conic-profile": {"cones": 1},
    "symmetric-T": {"c": 1.0},
    "identities": {"instances": 200},
}

CSV_COLUMNS = (
    "target_id",
    "params",
    "mean",
    "stderr",
    "oracle",
    "z_score",
    "status",
    "replicates",
    "seed",
    "wall_time_ms",
    "detail",
)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    params: dict = field(default_factory=dict)
    replicates: int = 1000
    seed: int | None = None
    out: str | None = None
    workers: int = 1
    timing: bool = True

    def validated(self):
        """Copy with defaults filled in and the seed resolved; raises ConfigError."""
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        params = dict(_DEFAULTS.get(self.kind, {}))
        params.update(self.params)
        missing = [p for p in _REQUIRED[self.kind] if p not in params]
        if missing:
            raise ConfigError(f"{self.kind} needs parameter(s): {', '.join(missing)}")
        if int(self.replicates) < 2:
            raise ConfigError("replicates must be at least 2")
        if int(self.workers) < 1:
            raise ConfigError("workers must be positive")
        return replace(self, params=params, seed=master_seed(self.seed), replicates=int(self.replicates))


def load_config(path=None, **overrides):
    """Read a TOML experiment file; keyword overrides (flags) win.

    Top-level keys are ``kind``, ``replicates``, ``seed``, ``out`` and
    ``workers``; the ``[params]`` table holds kind-specific parameters.
    Overrides set to ``None`` are ignored, and an override named after a
    parameter goes into ``params``.
    """
    doc = {}
    if path is not None:
        import tomli

        try:
            with open(path, "rb") as fh:
                doc = tomli.load(fh)
        except (OSError, tomli.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
    params = dict(doc.pop("params", {}))
    top = {k: v for k, v in doc.items() if k in ExperimentConfig.__dataclass_fields__}
    unknown = set(doc) - set(top)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key, value in overrides.items():
        if value is None:
            continue
        if key in ExperimentConfig.__dataclass_fields__ and key != "params":
            top[key] = value
        else:
            params[key] = value
    if "kind" not in top:
        raise ConfigError("config needs a kind")
    return ExperimentConfig(params=params, **top).validated()


@dataclass
class Row:
    target_id: str
    params: dict
    mean: float
    stderr: float | None
    oracle: float | None
    z: float | None
    status: str
    replicates: int
    seed: int | None
    wall_time_ms: float | None = None
    detail: str = ""

    @property
    def passed(self):
        return self.status in ("pass", "flag")

    def csv_fields(self):
        def num(x):
            return "" if x is None or (isinstance(x, float) and math.isnan(x)) else repr(float(x))

        if self.oracle is None:
            oracle = "unknown"
        elif math.isinf(self.oracle):
            oracle = "+inf" if self.oracle > 0 else "-inf"
        else:
            oracle = repr(float(self.oracle))
        return [
            self.target_id,
            ";".join(f"{k}={_fmt_param(v)}" for k, v in self.params.items()),
            num(self.mean),
            num(self.stderr),
            oracle,
            num(self.z),
            self.status,
            str(self.replicates),
            "" if self.seed is None else str(self.seed),
            "" if self.wall_time_ms is None else f"{self.wall_time_ms:.1f}",
            self.detail,
        ]


def _fmt_param(v):
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_fmt_param(x) for x in v) + "]"
    return str(v)


def stat_row(target_id, params, est: Estimate, oracle, wall_ms=None, threshold=Z_THRESHOLD):
    """Join an estimate with an oracle value (float, ``inf``, ``None`` or :class:`Oracle`)."""
    if isinstance(oracle, cf.Oracle):
        oracle = oracle.value
    detail = ";".join(est.flags)
    if oracle is None:
        return Row(target_id, params, est.mean, est.stderr, None, None, "flag", est.n_replicates, est.seed, wall_ms, detail or "no closed form")
    if not math.isfinite(oracle):
        return Row(target_id, params, est.mean, est.stderr, oracle, None, "flag", est.n_replicates, est.seed, wall_ms, detail or "divergent oracle")
    if est.stderr == 0 and math.isclose(est.mean, oracle, rel_tol=1e-9, abs_tol=1e-12):
        # every replicate equals the oracle up to its own round-off
        z = 0.0
    else:
        z = est.z_score(oracle)
    status = "pass" if abs(z) <= threshold else "fail"
    return Row(target_id, params, est.mean, est.stderr, float(oracle), float(z), status, est.n_replicates, est.seed, wall_ms, detail)


def exact_row(target_id, params, value, expected, ok, seed=None, replicates=1, wall_ms=None, detail=""):
    return Row(target_id, params, float(value), 0.0, float(expected), None, "pass" if ok else "fail", replicates, seed, wall_ms, detail)


@dataclass
class Report:
    rows: list
    configs: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r.passed for r in self.rows)

    @property
    def exit_code(self):
        return 0 if self.passed else 1

    def extend(self, other):
        self.rows.extend(other.rows)
        self.configs.extend(other.configs)
        self.extras.update(other.extras)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(r.csv_fields())
        return buf.getvalue()

    def to_json(self):
        doc = {
            "schema": "conehull.report",
            "version": REPORT_VERSION,
            "passed": self.passed,
            "configs": [asdict(c) for c in self.configs],
            "rows": [_jsonable(asdict(r)) for r in self.rows],
            "extras": _jsonable(self.extras),
        }
        return json.dumps(doc, indent=2, sort_keys=False)

    def summary_lines(self):
        out = []
        for r in self.rows:
            z = "" if r.z is None else f" z={r.z:+.2f}"
            o = "" if r.oracle is None else f" oracle={r.oracle:.6g}"
            out.append(f"[{r.status.upper():5s}] {r.target_id} {_fmt_params(r.params)} mean={r.mean:.6g}{o}{z}")
        return out

    def write(self, out, fmt="csv", gnuplot=False, figures=True):
        """Write ``report.csv`` or ``report.json`` (``fmt="both"`` for both) into directory ``out``.

        Figures are rendered next to the delimited output unless disabled.
        Returns the list of written paths.
        """
        try:
            os.makedirs(out, exist_ok=True)
            written = []
            if fmt in ("csv", "both"):
                written.append(_write_text(os.path.join(out, "report.csv"), self.to_csv()))
            if fmt in ("json", "both"):
                written.append(_write_text(os.path.join(out, "report.json"), self.to_json()))
            if fmt not in ("csv", "json", "both"):
                raise ConfigError(f"unknown format {fmt!r}")
            if figures:
                from .plotting import plot_report

                written.extend(plot_report(self, out))
            if gnuplot:
                from .plotting import write_gnuplot

                written.append(write_gnuplot(self, out))
        except OSError as exc:
            raise ConfigError(f"cannot write report to {out}: {exc}") from None
        return written


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def _fmt_params(p):
    return "(" + ", ".join(f"{k}={_fmt_param(v)}" for k, v in p.items()) + ")"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "+inf" if x > 0 else "-inf"
        return x
    if isinstance(x, np.integer):
        return int(x)
    return x


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = 1000.0 * (time.perf_counter() - self.t0)


def _poisson(p):
    return PoissonParams(int(p["d"]), float(p["gamma"]), float(p["c"]))


def _oracle(p, value):
    """The ``oracle`` parameter replaces the closed form (harness self-tests)."""
    return p["oracle"] if "oracle" in p else value


def _run_poisson_f(cfg, p):
    params = _poisson(p)
    with _Timer() as t:
        ests = estimate_f_vector_poisson(params, cfg.replicates, cfg.seed, cfg.workers)
    oracles = cf.expected_f_vector_poisson(params.d, params.gamma)
    tag = dict(d=params.d, gamma=params.gamma, c=params.c)
    return [stat_row(f"poisson_f_{i}", tag, e, _oracle(p, o), t.ms) for i, (e, o) in enumerate(zip(ests, oracles))]


def _run_T(cfg, p, symmetric=False):
    params = _poisson(p)
    a, b = float(p["a"]), float(p["b"])
    with _Timer() as t:
        est = estimate_T(params, a, b, cfg.replicates, cfg.seed, cfg.workers, symmetric=symmetric)
    fn = cf.expected_T_symmetric if symmetric else cf.expected_T
    tag = dict(d=params.d, gamma=params.gamma, c=params.c, a=a, b=b)
    tid = "symmetric_T" if symmetric else "poisson_T"
    return [stat_row(tid, tag, est, _oracle(p, fn(params.d, params.gamma, params.c, a, b)), t.ms)]


def _run_volume(cfg, p):
    params = _poisson(p)
    with _Timer() as t:
        est = estimate_volume(params, cfg.replicates, cfg.seed, cfg.workers)
    tag = dict(d=params.d, gamma=params.gamma, c=params.c)
    return [stat_row("poisson_volume", tag, est, _oracle(p, cf.expected_volume_poisson(params.d, params.gamma, params.c)), t.ms)]


def _run_intrinsic(cfg, p):
    params = _poisson(p)
    k = int(p["k"])
    with _Timer() as t:
        est = estimate_intrinsic_volume(params, k, int(p["dirs"]), cfg.replicates, cfg.seed, cfg.workers)
    tag = dict(d=params.d, gamma=params.gamma, c=params.c, k=k)
    oracle = cf.expected_intrinsic_volume(params.d, params.gamma, params.c, k)
    return [stat_row("intrinsic_volume", tag, est, _oracle(p, oracle), t.ms)]


def _run_B(cfg, p):
    k, d = int(p["k"]), int(p["d"])
    with _Timer() as t:
        est = estimate_B(k, d, cfg.replicates, int(p["inner"]), cfg.seed, cfg.workers, p["proposal"])
    tag = dict(k=k, d=d, inner=int(p["inner"]))
    return [stat_row("B_constant", tag, est, _oracle(p, cf.constant_B(k, d)), t.ms)]


def _run_cone_limit(cfg, p):
    d = int(p["d"])
    grid = [int(n) for n in p["n_grid"]]
    with _Timer() as t:
        table = estimate_cone_section_limit(d, grid, cfg.replicates, cfg.seed, cfg.workers)
    rows = []
    for label, ests in table:
        if label == "poisson":
            oracles = cf.expected_f_vector_poisson(d, 1.0)
            tag = dict(d=d, gamma=1.0, c=2.0)
            tid = "cone_limit_reference_f"
        else:
            oracles = cf.expected_section_f_vector(d, label)
            tag = dict(d=d, n=label)
            tid = "cone_section_f"
        for i, (e, o) in enumerate(zip(ests, oracles)):
            rows.append(stat_row(f"{tid}_{i}", tag, e, _oracle(p, o), t.ms))
    return rows


def _pooled(diffs, ses):
    """Mean of independent per-cone differences with its standard error."""
    diffs, ses = np.asarray(diffs), np.asarray(ses)
    se = float(np.sqrt(np.sum(ses**2)) / len(diffs))
    return float(np.mean(diffs)), se


def conic_identity_rows(d, n, cones, samples, seed, threshold=3.0):
    """Gauss-Bonnet, Crofton and Kubota checks over ``cones`` random cones.

    Each identity gets a pooled row (mean per-cone discrepancy against 0)
    and an exceedance row counting cones with ``|z| > threshold``; that
    count is tested against its binomial law under the identity.
    """
    m = d + 1
    gb, crofton, kubota = [], [[] for _ in range(m)], [[] for _ in range(m)]
    with _Timer() as t:
        for i in range(cones):
            rng = make_rng(seed, 8, d, i)
            prof = conic_profile(Cone.from_sample(sample_cone(d, n, rng)), samples, rng)
            gb.append((prof.even_sum.mean - 0.5, prof.even_sum.stderr))
            for k in range(m):
                crofton[k].append((prof.h_direct[k] - prof.h_from_v[k], math.hypot(prof.h_direct_stderr[k], prof.h_from_v_stderr[k])))
                kubota[k].append((prof.w_direct[k] - prof.w_from_v[k], math.hypot(prof.w_direct_stderr[k], prof.w_from_v_stderr[k])))
    tag = dict(d=d, n=n, cones=cones, samples=samples)
    rows = []
    families = [("gauss_bonnet_even", gb)]
    families += [(f"crofton_h_{k + 1}", crofton[k]) for k in range(1, m)]
    families += [(f"kubota_w_{k + 1}", kubota[k]) for k in range(m)]
    for name, pairs in families:
        diffs = [a for a, _ in pairs]
        ses = [b for _, b in pairs]
        mean, se = _pooled(diffs, ses)
        est = Estimate(mean, se, cones * samples, seed, name)
        rows.append(stat_row(f"conic_{name}", tag, est, 0.0, t.ms, threshold))
        zs = [abs(a) / b for a, b in pairs if b > 0]
        exceed = sum(z > threshold for z in zs)
        p_tail = 2 * stats.norm.sf(threshold)
        pval = float(stats.binom.sf(exceed - 1, len(zs), p_tail)) if exceed else 1.0
        rows.append(
            Row(
                f"conic_{name}_exceedances",
                tag,
                float(exceed),
                None,
                None,
                None,
                "pass" if pval > 0.01 else "fail",
                len(zs),
                seed,
                t.ms,
                f"cones with |z|>{threshold:g}; binomial p={pval:.3g}",
            )
        )
    return rows


def quadrant_rows(samples, seed, threshold=3.0):
    """The rotated quadrant pos{(1,1), (1,-1)}: v = (1/4, 1/2, 1/4) and h_2 = 1/4."""
    rng = make_rng(seed, 9)
    q = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    with _Timer() as t:
        prof = conic_profile(Cone.from_generators(q), samples, rng)
    tag = dict(cone="quadrant", samples=samples)
    rows = []
    for j, target in enumerate((0.25, 0.5, 0.25)):
        est = Estimate(float(prof.v[j]), float(prof.v_stderr[j]), samples, seed, f"v_{j}")
        rows.append(stat_row(f"quadrant_v_{j}", tag, est, target, t.ms, threshold))
    for route, mean, se in (("from_v", prof.h_from_v[1], prof.h_from_v_stderr[1]), ("direct", prof.h_direct[1], prof.h_direct_stderr[1])):
        rows.append(stat_row(f"quadrant_h_2_{route}", tag, Estimate(float(mean), float(se), samples, seed), 0.25, t.ms, threshold))
    return rows


def halfspace_rows(d, samples, seed, threshold=3.0):
    """Half-space {x_0 >= 0}: v_d = v_{d+1} = 1/2 and w = (1, ..., 1, 1/2)."""
    rng = make_rng(seed, 10, d)
    m = d + 1
    eye = np.eye(m)
    gens = np.vstack([eye[0], eye[1:], -eye[1:]])
    with _Timer() as t:
        prof = conic_profile(Cone.from_generators(gens), samples, rng)
    tag = dict(cone="halfspace", d=d, samples=samples)
    rows = []
    for j in range(m + 1):
        est = Estimate(float(prof.v[j]), float(prof.v_stderr[j]), samples, seed)
        rows.append(stat_row(f"halfspace_v_{j}", tag, est, 0.5 if j >= d else 0.0, t.ms, threshold))
    for k in range(m):
        est = Estimate(float(prof.w_from_v[k]), float(prof.w_from_v_stderr[k]), samples, seed)
        rows.append(stat_row(f"halfspace_w_{k + 1}", tag, est, 0.5 if k == m - 1 else 1.0, t.ms, threshold))
    return rows


def _run_conic(cfg, p):
    d = int(p["d"])
    samples = int(p.get("samples", cfg.replicates))
    kind = p.get("cone", "random")
    if kind == "quadrant":
        return quadrant_rows(samples, cfg.seed)
    if kind == "halfspace":
        return halfspace_rows(d, samples, cfg.seed)
    if kind != "random":
        raise ConfigError(f"unknown cone {kind!r}; expected random, quadrant or halfspace")
    if "n" not in p:
        raise ConfigError("conic-profile on a random cone needs parameter n")
    n, cones = int(p["n"]), int(p["cones"])
    if cones > 1:
        return conic_identity_rows(d, n, cones, samples, cfg.seed)
    rng = make_rng(cfg.seed, 8, d, 0)
    with _Timer() as t:
        prof = conic_profile(Cone.from_sample(sample_cone(d, n, rng)), samples, rng)
    tag = dict(d=d, n=n, samples=samples)
    rows = []
    for j in range(d + 2):
        rows.append(stat_row(f"conic_v_{j}", tag, Estimate(float(prof.v[j]), float(prof.v_stderr[j]), samples, cfg.seed), None, t.ms))
    rows.append(stat_row("conic_even_sum", tag, prof.even_sum, 0.5, t.ms, 3.0))
    rows.append(stat_row("conic_odd_sum", tag, prof.odd_sum, 0.5, t.ms, 3.0))
    for k in range(d + 1):
        diff = Estimate(
            float(prof.h_direct[k] - prof.h_from_v[k]),
            float(math.hypot(prof.h_direct_stderr[k], prof.h_from_v_stderr[k])),
            samples,
            cfg.seed,
        )
        rows.append(stat_row(f"conic_crofton_h_{k + 1}", tag, diff, 0.0, t.ms, 3.0))
    return rows, {"conic_profile": prof.to_dict()}


def _run_buchta(cfg, p):
    d, n, k = int(p["d"]), int(p["n"]), int(p["k"])
    samples = int(p.get("samples", cfg.replicates))
    with _Timer() as t:
        rep = buchta_identity_check(d, n, k, samples, make_rng(cfg.seed, 11, d, k))
    rep = replace(rep, lhs=replace(rep.lhs, seed=cfg.seed), rhs=replace(rep.rhs, seed=cfg.seed))
    tag = dict(d=d, n=n, k=k, samples=samples)
    j = d + 1 - k
    side = cf.expected_section_f_vector(d, n + j)[j - 1]
    rows = [
        stat_row("buchta_lhs", tag, rep.lhs, _oracle(p, side), t.ms),
        stat_row("buchta_rhs", tag, rep.rhs, _oracle(p, side), t.ms),
    ]
    se = math.hypot(rep.lhs.stderr, rep.rhs.stderr)
    diff = Estimate(rep.lhs.mean - rep.rhs.mean, se, samples, cfg.seed, "buchta_difference")
    rows.append(stat_row("buchta_difference", tag, diff, 0.0, t.ms, 3.0))
    if rep.exact_lhs is not None:
        rows.append(exact_row("buchta_exact", tag, rep.exact_lhs, rep.exact_rhs, rep.exact_pass, cfg.seed, 1, t.ms))
    return rows


def _run_samplers(cfg, p):
    with _Timer() as t:
        results = sampler_battery(cfg.replicates, cfg.seed)
    rows = []
    for r in results:
        rows.append(
            Row(
                r.test_id,
                r.params,
                r.statistic,
                None,
                None,
                None,
                "pass" if r.passed else "fail",
                cfg.replicates,
                cfg.seed,
                t.ms,
                f"p={r.p_value:.4g} alpha={r.alpha:g}",
            )
        )
    return rows


def _extreme_points_lp(P):
    """Indices of points not in the convex hull of the others (LP oracle)."""
    keep = []
    for i in range(len(P)):
        others = np.delete(P, i, axis=0)
        if not point_in_conv_lp(P[i], others):
            keep.append(i)
    return keep


def hull_identity_violations(h, d):
    """Per-hull exact identities; returns the names of those that fail."""
    bad = []
    fv = f_vector(h)
    if euler_characteristic(fv) != 1 - (-1) ** d:
        bad.append("euler")
    if d >= 2 and d * fv[d - 1] != 2 * fv[d - 2]:
        bad.append("dehn_sommerville")
    if t_functional(h, 0, 0) != fv[d - 1]:
        bad.append("t00_facets")
    if h.contains_origin:
        t11 = t_functional(h, 1, 1)
        vol = hull_volume(h)
        if abs(t11 - d * vol) > 1e-9 * max(1.0, abs(t11)):
            bad.append("t11_volume")
    return bad


def _run_identities(cfg, p):
    """Exact identities on sampled Poisson and symmetric hulls plus the LP vertex oracle."""
    rows = []
    seed = cfg.seed
    cases = [(2, 2.0, 1.0), (3, 2.0, 1.0), (2, 1.0, 2.0), (3, 1.0, 2.0), (4, 2.0, 1.0), (5, 2.0, 1.0), (6, 2.0, 1.0)]
    per = max(2, cfg.replicates // len(cases))
    with _Timer() as t:
        counts = {"euler": 0, "dehn_sommerville": 0, "t00_facets": 0, "t11_volume": 0}
        total = 0
        for ci, (d, g, c) in enumerate(cases):
            params = PoissonParams(d, g, c)
            for i in range(per):
                rng = make_rng(seed, 12, ci, i)
                _, h = sample_poisson_hull(params, rng)
                hs = sample_symmetric_hull(params, rng)
                for hull in (h, hs):
                    total += 1
                    for name in hull_identity_violations(hull, d):
                        counts[name] += 1
    for name, v in counts.items():
        rows.append(exact_row(f"identity_{name}", dict(hulls=total), v, 0, v == 0, seed, total, t.ms, "violations"))

    instances = int(p["instances"])
    with _Timer() as t:
        mismatches = 0
        for i in range(instances):
            rng = make_rng(seed, 13, i)
            d = (2, 3, 4)[i % 3]
            n = int(rng.integers(d + 2, 61))
            scale = rng.standard_cauchy(size=(n, 1))
            P = rng.standard_normal((n, d)) * np.abs(scale) ** 0.5
            h = convex_hull(P)
            hv = {tuple(v) for v in np.round(h.vertices, 12)}
            lv = {tuple(v) for v in np.round(P[_extreme_points_lp(P)], 12)}
            mismatches += hv != lv
    rows.append(exact_row("identity_hull_vs_lp_vertices", dict(instances=instances), mismatches, 0, mismatches == 0, seed, instances, t.ms, "mismatched instances"))
    return rows


def infinity_branch_violations():
    """Boundary grid for the divergence conditions of the T and volume oracles.

    Returns ``(checked, failures)`` where each failure names the point.
    """
    failures = []
    checked = 0
    eps = 1e-9
    for d in range(1, 6):
        for gamma in (0.5, 1.0, 1.5, 2.0, 3.0):
            for b in (0.0, 0.5, 1.0, gamma - eps, gamma, gamma + eps, 2.0):
                if b < 0:
                    continue
                edge = (gamma - b) * d + b
                for a in sorted({0.0, 0.5, 1.0, max(edge - eps, 0.0), max(edge, 0.0), edge + eps}):
                    if a < 0:
                        continue
                    checked += 1
                    should_diverge = (gamma - b) * d + b - a <= 0 or gamma <= b
                    val = cf.expected_T(d, gamma, 1.0, a, b).value
                    if math.isinf(val) != should_diverge or (not should_diverge and not val > 0):
                        failures.append(("T", d, gamma, a, b))
            checked += 1
            vol = cf.expected_volume_poisson(d, gamma, 1.0).value
            if math.isinf(vol) != (gamma <= 1):
                failures.append(("volume", d, gamma))
        for gamma in (1.0 - eps, 1.0, 1.0 + eps):
            checked += 1
            vol = cf.expected_volume_poisson(d, gamma, 1.0).value
            if math.isinf(vol) != (gamma <= 1):
                failures.append(("volume", d, gamma))
    return checked, failures


def _run_infinity(cfg, p):
    with _Timer() as t:
        checked, failures = infinity_branch_violations()
    detail = "" if not failures else "first failure: " + repr(failures[0])
    return [exact_row("infinity_branches", dict(grid=checked), len(failures), 0, not failures, None, checked, t.ms, detail)]


_RUNNERS = {
    "poisson-f": _run_poisson_f,
    "poisson-T": _run_T,
    "poisson-volume": _run_volume,
    "intrinsic": _run_intrinsic,
    "B-constant": _run_B,
    "cone-limit": _run_cone_limit,
    "conic-profile": _run_conic,
    "buchta": _run_buchta,
    "symmetric-T": lambda cfg, p: _run_T(cfg, p, symmetric=True),
    "sampler-tests": _run_samplers,
    "identities": _run_identities,
    "infinity-branches": _run_infinity,
}


def run(config: ExperimentConfig, write=True, fmt="csv", gnuplot=False, figures=True):
    """Execute one experiment; estimator errors become ``error`` rows.

    When ``config.out`` is set and ``write`` is true the report is written
    there.
    """
    cfg = config.validated()
    p = cfg.params
    extras = {}
    try:
        rows = _RUNNERS[cfg.kind](cfg, p)
        if isinstance(rows, tuple):
            rows, extras = rows
    except ConfigError:
        raise
    except (ConeHullError, ArithmeticError, ValueError) as exc:
        rows = [Row(cfg.kind, dict(p), float("nan"), None, None, None, "error", cfg.replicates, cfg.seed, None, f"{type(exc).__name__}: {exc}")]
    if not cfg.timing:
        for r in rows:
            r.wall_time_ms = None
    report = Report(rows, [cfg], extras)
    if write and cfg.out:
        report.write(cfg.out, fmt=fmt, gnuplot=gnuplot, figures=figures)
    return report


def _preset_manifest(full):
    """The acceptance battery; ``full`` uses the stated sample sizes."""
    R = (lambda fast, big: big if full else fast)
    E = ExperimentConfig
    return [
        E("poisson-f", dict(d=2, gamma=2.0, c=1.0), R(600, 2000)),
        E("poisson-f", dict(d=3, gamma=2.0, c=1.0), R(400, 2000)),
        E("poisson-f", dict(d=3, gamma=2.0, c=2.5), R(400, 1500)),
        E("cone-limit", dict(d=2, n_grid=[5, 10, 20, 100]), R(600, 2000)),
        E("cone-limit", dict(d=1, n_grid=[3, 10, 50]), R(100, 500)),
        E("poisson-f", dict(d=2, gamma=1.0, c=2.0), R(600, 2000)),
        E("B-constant", dict(k=2, d=2, inner=200), R(2000, 10000)),
        E("B-constant", dict(k=3, d=3, inner=200), R(3000, 20000)),
        E("B-constant", dict(k=2, d=3, inner=200), R(2000, 10000)),
        E("poisson-volume", dict(d=2, gamma=2.0, c=2.0), R(600, 2000)),
        E("poisson-T", dict(d=2, gamma=1.0, c=1.0, a=1.0, b=0.0), R(600, 2000)),
        E("symmetric-T", dict(d=2, gamma=2.0, c=1.0, a=0.0, b=0.0), R(600, 2000)),
        E("symmetric-T", dict(d=2, gamma=2.0, c=1.0, a=1.0, b=1.0), R(600, 2000)),
        E("intrinsic", dict(d=2, gamma=2.0, c=2.0, k=1), R(300, 1000)),
        E("conic-profile", dict(d=1, n=6, cones=20), R(1000, 4000)),
        E("conic-profile", dict(d=2, n=8, cones=20), R(500, 2000)),
        E("conic-profile", dict(d=3, n=8, cones=20), R(300, 2000)),
        E("conic-profile", dict(d=1, cone="quadrant"), R(2000, 10000)),
        E("conic-profile", dict(d=2, cone="halfspace"), R(1000, 4000)),
        E("conic-profile", dict(d=3, cone="halfspace"), R(1000, 4000)),
        E("buchta", dict(d=1, n=10, k=1), R(500, 2000)),
        E("buchta", dict(d=2, n=20, k=1), R(2000, 10000)),
        E("buchta", dict(d=2, n=20, k=2), R(2000, 10000)),
        E("sampler-tests", {}, R(2000, 4000)),
        E("identities", dict(instances=200), R(140, 700)),
        E("infinity-branches", {}, 2),
    ]


PRESETS = {"fast": lambda: _preset_manifest(False), "full": lambda: _preset_manifest(True)}


def verify_all(preset="fast", seed=None, workers=1, manifest=None, progress=None):
    """Run the whole acceptance battery and collect one report.

    Parameters
    ----------
    preset : {"fast", "full"}
    manifest : list of ExperimentConfig, optional
        Replaces the preset (used by harness self-tests).
    progress : callable, optional
        Called with each finished sub-report.
    """
    if manifest is None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; expected one of {', '.join(PRESETS)}")
        manifest = PRESETS[preset]()
    seed = master_seed(seed)
    total = Report([], [], {})
    for i, cfg in enumerate(manifest):
        cfg = replace(cfg, seed=cfg.seed if cfg.seed is not None else seed + i, workers=workers)
        sub = run(cfg, write=False)
        if progress is not None:
            progress(sub)
        total.extend(sub)
    return total

