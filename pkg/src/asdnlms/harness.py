"""Seeded realizations, Monte Carlo campaigns, metrics and aggregation.

A realization executes the synchronous round loop

    decide sampling -> adapt -> transmit/cache -> ACW update (sampled nodes)
    -> combine -> refresh squared-error caches -> update alpha

for the configured number of iterations, recording per-iteration network
MSD, sampled-node count, communication count and the operation-cost model.
Realizations are independent; aggregation is an element-wise mean.

All RNG use is keyed by (seed, realization, node, role) so different
policies see identical signal streams — paired comparisons stay paired.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from asdnlms import analysis
from asdnlms.diffusion import SIGMA2_FLOOR
from asdnlms.network import Topology, build_random_geometric, load_edge_list, uniform_weights
from asdnlms.sampling import (
    AS_KINDS,
    PolicyConfig,
    draw_active_links,
    draw_sampled_set,
)
from asdnlms.signals import (
    ROLE_POLICY,
    Environment,
    draw_signal_blocks,
    stream_rng,
)

COMM_UNITS = ("link", "broadcast")


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass(frozen=True)
class TopologySpec:
    kind: str = "random_geometric"
    V: int = 20
    radius: float = 0.35
    edge_list: str | None = None


@dataclass(frozen=True)
class EnvSpec:
    M: int = 50
    sigma2_v_min: float = 0.1
    sigma2_v_max: float = 0.4
    sigma2_v: tuple[float, ...] | None = None
    sigma2_u: float = 1.0
    mu_tilde_min: float = 0.2
    mu_tilde_max: float = 1.0
    mu_tilde: tuple[float, ...] | None = None
    nu: float = 0.2
    delta: float = 1e-5
    flip_iteration: int | None = None


@dataclass(frozen=True)
class RunConfig:
    topology: TopologySpec
    env: EnvSpec
    policy: PolicyConfig
    iterations: int = 20000
    realizations: int = 100
    seed: int = 1
    out_dir: str | None = None
    comm_unit: str = "link"
    label: str | None = None

    def name(self) -> str:
        return self.label or self.policy.kind


def validate_config(cfg: RunConfig) -> None:
    """Reject configurations the engine would not run correctly."""
    t, e = cfg.topology, cfg.env
    if cfg.iterations < 1 or cfg.realizations < 1:
        raise ConfigError("iterations and realizations must be >= 1")
    if cfg.comm_unit not in COMM_UNITS:
        raise ConfigError(f"comm_unit must be one of {COMM_UNITS}")
    if t.kind not in ("random_geometric", "edge_list"):
        raise ConfigError(f"unknown topology kind {t.kind!r}")
    if t.kind == "random_geometric":
        if t.V < 1:
            raise ConfigError("topology.V must be >= 1")
        if t.radius <= 0:
            raise ConfigError("topology.radius must be > 0")
    if t.kind == "edge_list" and not t.edge_list:
        raise ConfigError("topology.edge_list file required for kind=edge_list")
    if e.M < 1:
        raise ConfigError("env.M must be >= 1")
    if e.sigma2_v is None and not 0 < e.sigma2_v_min <= e.sigma2_v_max:
        raise ConfigError("noise profile needs 0 < sigma2_v_min <= sigma2_v_max")
    if e.sigma2_v is not None and any(v < 0 for v in e.sigma2_v):
        raise ConfigError("explicit sigma2_v entries must be >= 0")
    if e.sigma2_u <= 0:
        raise ConfigError("env.sigma2_u must be > 0")
    if e.mu_tilde is None and not 0 < e.mu_tilde_min <= e.mu_tilde_max < 2:
        raise ConfigError("step-size profile needs 0 < mu_tilde_min <= mu_tilde_max < 2")
    if e.mu_tilde is not None and any(not 0 < m < 2 for m in e.mu_tilde):
        raise ConfigError("explicit mu_tilde entries must lie in (0, 2)")
    if not 0 < e.nu <= 1:
        raise ConfigError("env.nu must lie in (0, 1]")
    if e.delta <= 0:
        raise ConfigError("env.delta must be > 0")
    if e.flip_iteration is not None and not 0 < e.flip_iteration < cfg.iterations:
        raise ConfigError("env.flip_iteration must lie strictly inside the run")
    V = _node_count(cfg)
    cfg.policy.validate_for(V)
    if e.sigma2_v is not None and len(e.sigma2_v) != V:
        raise ConfigError(f"explicit sigma2_v must have length V={V}")
    if e.mu_tilde is not None and len(e.mu_tilde) != V:
        raise ConfigError(f"explicit mu_tilde must have length V={V}")


def _node_count(cfg: RunConfig) -> int:
    if cfg.topology.kind == "edge_list":
        head = Path(cfg.topology.edge_list).read_text().split(None, 1)[0]
        return int(head)
    return cfg.topology.V


@dataclass(frozen=True)
class Materialized:
    """Topology, environment and step-size profile pinned by the config seed."""

    topology: Topology
    env: Environment
    mu_tilde: np.ndarray


def materialize(cfg: RunConfig) -> Materialized:
    """Build the shared, realization-independent state deterministically."""
    validate_config(cfg)
    t, e = cfg.topology, cfg.env
    if t.kind == "edge_list":
        top = load_edge_list(t.edge_list)
    else:
        top = build_random_geometric(t.V, t.radius, np.random.SeedSequence((cfg.seed, 1)))
    V = top.node_count

    env_rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 2)))
    w_opt = env_rng.uniform(-1.0, 1.0, size=e.M)
    if e.sigma2_v is not None:
        sigma2_v = np.asarray(e.sigma2_v, dtype=float)
    else:
        sigma2_v = env_rng.uniform(e.sigma2_v_min, e.sigma2_v_max, size=V)
    env = Environment(
        w_opt=w_opt,
        sigma2_v=sigma2_v,
        sigma2_u=np.full(V, e.sigma2_u),
        flip_iteration=e.flip_iteration,
    )

    if e.mu_tilde is not None:
        mu_tilde = np.asarray(e.mu_tilde, dtype=float)
    else:
        mu_rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 3)))
        mu_tilde = mu_rng.uniform(e.mu_tilde_min, e.mu_tilde_max, size=V)
    return Materialized(topology=top, env=env, mu_tilde=mu_tilde)


# --- metrics -----------------------------------------------------------------


def network_msd(W: np.ndarray, w_opt: np.ndarray) -> float:
    """(1/V) sum_k ||w_opt - w_k||^2 for a (V, M) stack of estimates."""
    dev = w_opt[None, :] - np.atleast_2d(W)
    return float(np.einsum("vm,vm->", dev, dev) / dev.shape[0])


def moving_average(x: np.ndarray, L: int = 64) -> np.ndarray:
    """Causal length-L uniform average; the first L-1 outputs average the prefix."""
    if L < 1:
        raise ValueError("L must be >= 1")
    x = np.asarray(x, dtype=float)
    n = x.size
    c = np.cumsum(x)
    out = np.empty(n)
    head = min(L, n)
    out[:head] = c[:head] / np.arange(1, head + 1)
    if n > L:
        out[L:] = (c[L:] - c[:-L]) / L
    return out


def to_db(x: np.ndarray) -> np.ndarray:
    return 10.0 * np.log10(np.maximum(np.asarray(x, dtype=float), 1e-300))


@dataclass(frozen=True)
class IterationRecord:
    n: int
    msd: float
    sampled_count: int
    communications: int
    mults: int
    adds: int


@dataclass
class RunSeries:
    """Array-backed per-iteration record series for one realization."""

    msd: np.ndarray
    sampled: np.ndarray
    comms: np.ndarray
    mults: np.ndarray
    adds: np.ndarray
    sampled_bitmap: np.ndarray | None = None
    states: np.ndarray | None = None  # (T, V, M) combined estimates; debug runs only

    def __len__(self) -> int:
        return self.msd.size

    def record(self, n: int) -> IterationRecord:
        return IterationRecord(
            n=n,
            msd=float(self.msd[n]),
            sampled_count=int(self.sampled[n]),
            communications=int(self.comms[n]),
            mults=int(self.mults[n]),
            adds=int(self.adds[n]),
        )


# --- realization engine ------------------------------------------------------


def run_realization(
    cfg: RunConfig,
    realization: int,
    mat: Materialized | None = None,
    record_sampled: bool = False,
    record_states: bool = False,
) -> RunSeries:
    """Run one seeded realization of the configured policy.

    Deterministic: identical (cfg, realization) always produce identical
    series.  ``mat`` may be passed to share the materialized network across
    realizations; it is never mutated.  ``record_states`` keeps the full
    (T, V, M) estimate trajectory — debugging aid for short runs.
    """
    if mat is None:
        mat = materialize(cfg)
    top, env, mu_tilde = mat.topology, mat.env, mat.mu_tilde
    pol = cfg.policy
    kind = pol.kind
    V, M, T = top.node_count, env.M, cfg.iterations

    inputs, noises = draw_signal_blocks(env, cfg.seed, realization, T)
    policy_rng = stream_rng(cfg.seed, realization, 0, ROLE_POLICY)

    deg = top.degrees()
    out_deg = deg - 1
    src_e, dst_e = top.edge_arrays()
    noself = src_e != dst_e
    src_ns, dst_ns = src_e[noself], dst_e[noself]
    A = top.adjacency().astype(float)

    w_opt = env.w_opt.copy()
    flip_at = env.flip_iteration

    W = np.zeros((V, M))
    PSI = np.zeros((V, M))
    U = np.zeros((V, M))
    S2e = np.ones(src_e.size)
    if kind == "non_cooperative":
        C = np.eye(V)
    else:
        C = uniform_weights(top)
    nu = cfg.env.nu
    delta = cfg.env.delta

    adaptive = kind in AS_KINDS
    if adaptive:
        alpha = np.full(V, pol.alpha_plus)
        eps2 = np.zeros(V)
        # phi'(alpha) inlined below; alpha stays clamped so exp() cannot overflow
        sgm_span = 1.0 / (1.0 + np.exp(-pol.alpha_plus)) - 1.0 / (1.0 + np.exp(pol.alpha_plus))
    cache = None
    if kind == "probabilistic_transmission":
        cache = np.zeros((V, V, M))  # cache[k, j] = psi_j as last received at k

    ones_v = np.ones(V, dtype=np.int64)
    msd = np.empty(T)
    sampled = np.empty(T, dtype=np.int64)
    comms = np.empty(T, dtype=np.int64)
    mults = np.empty(T, dtype=np.int64)
    adds = np.empty(T, dtype=np.int64)
    bitmap = np.empty((T, V), dtype=bool) if record_sampled else None
    states = np.empty((T, V, M)) if record_states else None

    # Constant cost/communication terms (see the counting notes at the end
    # of this function).
    D = int(deg.sum())
    if kind in ("full", "probabilistic_transmission"):
        const_cost = (M * (3 + deg) + 4).sum(), (M * (3 + deg) + 3).sum()
    elif kind == "non_cooperative":
        const_cost = V * (4 * M + 4), V * (4 * M + 3)
    else:
        const_cost = None
    link_total = D - V  # every node to every neighbor but itself

    for n in range(T):
        if flip_at is not None and n == flip_at:
            w_opt = -w_opt

        # decide
        if adaptive:
            s = (alpha >= 0).astype(np.int64)
        elif kind == "random_sampling":
            s = draw_sampled_set(pol, V, policy_rng)
        else:
            s = ones_v
        s_col = (s == 1)[:, None]

        # streaming data
        U[:, 1:] = U[:, :-1]
        U[:, 0] = inputs[n]
        d = U @ w_opt + noises[n]

        # adapt
        e = d - np.einsum("vm,vm->v", U, W)
        mu = mu_tilde / (delta + np.einsum("vm,vm->v", U, U))
        step = (s * mu * e)[:, None] * U
        if kind == "as_censoring":
            PSI = np.where(s_col, W + step, PSI)
        else:
            PSI = np.where(s_col, W + step, W)

        # transmit / cache
        if kind == "probabilistic_transmission":
            act = draw_active_links(pol.p, src_ns, policy_rng)
            cache[dst_ns[act], src_ns[act]] = PSI[src_ns[act]]
            cache[np.arange(V), np.arange(V)] = PSI
            comm_n = int(act.sum()) if cfg.comm_unit == "link" else int(
                np.unique(src_ns[act]).size
            )
        elif kind == "non_cooperative":
            comm_n = 0
        elif kind == "as_censoring":
            comm_n = int((s * out_deg).sum()) if cfg.comm_unit == "link" else int(s.sum())
        else:
            comm_n = link_total if cfg.comm_unit == "link" else V

        # ACW update for sampled nodes (weights of unsampled nodes stay stale)
        if kind != "non_cooperative":
            recv = cache[dst_e, src_e] if cache is not None else PSI[src_e]
            diff = recv - W[dst_e]
            d2 = np.einsum("em,em->e", diff, diff)
            upd = s[dst_e].astype(bool)
            S2e[upd] = np.maximum((1.0 - nu) * S2e[upd] + nu * d2[upd], SIGMA2_FLOOR)
            inv = 1.0 / S2e
            colsum = np.bincount(dst_e, weights=inv, minlength=V)
            C[src_e[upd], dst_e[upd]] = (inv / colsum[dst_e])[upd]

        # combine
        if kind == "probabilistic_transmission":
            W = np.einsum("jk,kjm->km", C, cache)
        elif kind == "non_cooperative":
            W = PSI.copy()
        else:
            W = C.T @ PSI

        # squared-error caches and alpha
        if adaptive:
            eps2 = np.where(s == 1, e * e, eps2)
            q = C.T @ eps2
            sg = 1.0 / (1.0 + np.exp(-alpha))
            pp = sg * (1.0 - sg) / sgm_span
            alpha = np.clip(
                alpha + pol.mu_s * pp * (q - pol.beta * s),
                -pol.alpha_plus,
                pol.alpha_plus,
            )

        # metrics
        dev = w_opt[None, :] - W
        msd[n] = np.einsum("vm,vm->", dev, dev) / V
        S = int(s.sum())
        sampled[n] = S
        comms[n] = comm_n
        if bitmap is not None:
            bitmap[n] = s.astype(bool)
        if states is not None:
            states[n] = W

        # Operation counters follow the per-node cost model evaluated on the
        # current sampling states: the adapt terms are gated by s_k, the
        # combine term M*|N_k| is always paid, and the adaptive kinds add
        # the mechanism overhead (one term per sampled neighbor, plus the
        # step-size/gradient products).  Summed over k,
        # sum_k sum_{i in N_k} s_i = s . deg because the adjacency
        # (self included) is symmetric.
        if const_cost is not None:
            mults[n], adds[n] = const_cost
        elif adaptive:
            ssum_total = int(s @ deg)
            mults[n] = (3 * M + 4) * S + M * D + ssum_total + 2 * V
            adds[n] = (4 * M + 2) * S + M * D - M * V + D + 2 * V
        else:  # random_sampling
            mults[n] = (3 * M + 4) * S + M * D
            adds[n] = (4 * M + 2) * S + M * D - M * V + V

    return RunSeries(msd=msd, sampled=sampled, comms=comms, mults=mults, adds=adds,
                     sampled_bitmap=bitmap, states=states)


# --- Monte Carlo aggregation -------------------------------------------------


@dataclass
class MonteCarloResult:
    config: RunConfig
    msd: np.ndarray
    msd_db: np.ndarray
    msd_db_smoothed: np.ndarray
    sampled: np.ndarray
    comms: np.ndarray
    mults: np.ndarray
    adds: np.ndarray
    steady: dict
    manifest: dict


def steady_windows(iterations: int, flip_iteration: int | None) -> dict[str, tuple[int, int]]:
    """Final-20% windows: of the pre-flip and post-flip segments, or of the run."""
    if flip_iteration is None:
        return {"pre": (iterations - max(iterations // 5, 1), iterations)}
    pre_len = max(flip_iteration // 5, 1)
    post_len = max((iterations - flip_iteration) // 5, 1)
    return {
        "pre": (flip_iteration - pre_len, flip_iteration),
        "post": (iterations - post_len, iterations),
    }


def monte_carlo(cfg: RunConfig, mat: Materialized | None = None,
                smoothing: int = 64) -> MonteCarloResult:
    """Element-wise mean over the configured realizations, plus summaries."""
    if mat is None:
        mat = materialize(cfg)
    T, R = cfg.iterations, cfg.realizations
    acc = {k: np.zeros(T) for k in ("msd", "sampled", "comms", "mults", "adds")}
    for r in range(R):
        series = run_realization(cfg, r, mat)
        acc["msd"] += series.msd
        acc["sampled"] += series.sampled
        acc["comms"] += series.comms
        acc["mults"] += series.mults
        acc["adds"] += series.adds
    for k in acc:
        acc[k] /= R

    msd_db = to_db(acc["msd"])
    msd_db_smoothed = to_db(moving_average(acc["msd"], smoothing))

    windows = steady_windows(T, cfg.env.flip_iteration)
    steady = {}
    for name, (lo, hi) in windows.items():
        sl = slice(lo, hi)
        steady[name] = {
            "window": (lo, hi),
            "sampled": float(acc["sampled"][sl].mean()),
            "comms": float(acc["comms"][sl].mean()),
            "mults": float(acc["mults"][sl].mean()),
            "adds": float(acc["adds"][sl].mean()),
            "msd_db_smoothed": float(msd_db_smoothed[sl].mean()),
        }

    manifest = build_manifest(cfg, mat, steady)
    return MonteCarloResult(
        config=cfg,
        msd=acc["msd"],
        msd_db=msd_db,
        msd_db_smoothed=msd_db_smoothed,
        sampled=acc["sampled"],
        comms=acc["comms"],
        mults=acc["mults"],
        adds=acc["adds"],
        steady=steady,
        manifest=manifest,
    )


def build_manifest(cfg: RunConfig, mat: Materialized, steady: dict) -> dict:
    """Human-readable echo of the full run: config, drawn profiles, predictions."""
    top, env = mat.topology, mat.env
    m: dict[str, object] = {}
    m["label"] = cfg.name()
    m["policy.kind"] = cfg.policy.kind
    for p in ("beta", "mu_s", "alpha_plus", "V_s", "p"):
        val = getattr(cfg.policy, p)
        if val is not None:
            m[f"policy.{p}"] = val
    m["run.iterations"] = cfg.iterations
    m["run.realizations"] = cfg.realizations
    m["run.seed"] = cfg.seed
    m["run.comm_unit"] = cfg.comm_unit
    m["topology.kind"] = cfg.topology.kind
    m["topology.V"] = top.node_count
    if cfg.topology.kind == "random_geometric":
        m["topology.radius"] = cfg.topology.radius
    deg = top.degrees()
    m["topology.links"] = int((deg - 1).sum() // 2)
    m["topology.degree_min"] = int(deg.min())
    m["topology.degree_mean"] = float(deg.mean())
    m["topology.degree_max"] = int(deg.max())
    m["env.M"] = env.M
    m["env.nu"] = cfg.env.nu
    m["env.delta"] = cfg.env.delta
    m["env.flip_iteration"] = cfg.env.flip_iteration
    m["env.sigma2_u"] = cfg.env.sigma2_u
    m["drawn.sigma2_v"] = ",".join(f"{v:.6g}" for v in env.sigma2_v)
    m["drawn.mu_tilde"] = ",".join(f"{v:.6g}" for v in mat.mu_tilde)
    m["drawn.sigma2_v_min"] = env.sigma2_min
    m["drawn.sigma2_v_max"] = env.sigma2_max

    if cfg.policy.kind in AS_KINDS and cfg.policy.beta >= env.sigma2_max:
        pred = analysis.predict(top.node_count, cfg.policy.beta, env.sigma2_min, env.sigma2_max)
        m["predicted.Vs_lower"] = pred.Vs_lower
        m["predicted.Vs_upper"] = pred.Vs_upper
        m["predicted.theta_max"] = pred.theta_max
        m["predicted.theta_min"] = pred.theta_min
        m["predicted.theta_bar_max"] = pred.theta_bar_max
        m["predicted.theta_bar_min"] = pred.theta_bar_min
        m["predicted.duty_cycle_lower"] = pred.duty_cycle_lower
        m["predicted.duty_cycle_upper"] = pred.duty_cycle_upper

    for name, summary in steady.items():
        lo, hi = summary["window"]
        m[f"steady.{name}.window"] = f"{lo}:{hi}"
        for key in ("sampled", "comms", "mults", "adds", "msd_db_smoothed"):
            m[f"steady.{name}.{key}"] = summary[key]
    return m


# --- output ------------------------------------------------------------------

CSV_HEADER = "n,msd_db,msd_db_smoothed,sampled,comms,mults,adds"


def write_csv(result: MonteCarloResult, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    cols = np.column_stack(
        [
            np.arange(len(result.msd)),
            result.msd_db,
            result.msd_db_smoothed,
            result.sampled,
            result.comms,
            result.mults,
            result.adds,
        ]
    )
    with path.open("w") as f:
        f.write(CSV_HEADER + "\n")
        for row in cols:
            f.write(
                f"{int(row[0])},{row[1]:.6f},{row[2]:.6f},{row[3]:.6g},"
                f"{row[4]:.6g},{row[5]:.6g},{row[6]:.6g}\n"
            )


def write_manifest(manifest: dict, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{k} = {v}" for k, v in manifest.items()]
    path.write_text("\n".join(lines) + "\n")


def write_sampled_bitmap(series: RunSeries, path: str | Path) -> None:
    """Diagnostic stream: one line per iteration, one 0/1 per node."""
    if series.sampled_bitmap is None:
        raise ValueError("run the realization with record_sampled=True")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as f:
        for row in series.sampled_bitmap:
            f.write("".join("1" if v else "0" for v in row) + "\n")
