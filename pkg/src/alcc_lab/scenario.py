"""Scenario configuration: one fully-specified end-to-end experiment.

Scenarios are frozen dataclasses; sweeps derive variants with
``with_updates``. The on-disk format is flat key-value text with typed
sections (configparser syntax), see ``configs/`` for examples.
"""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
from dataclasses import dataclass

from .codec import FUNCTIONS, EncodingParams
from .numeric import ParameterError
from .threat import TrustProfile

LOCALIZATION_MODES = ("independent", "restricted", "joint")
BASE_MATRIX_MODES = ("all-one", "strong", "weak")


@dataclass(frozen=True)
class Scenario:
    # encoding
    n_workers: int = 31
    k: int = 5
    t: int = 3
    beta: float = 1.5
    sigma_pad: float = 1e6
    function: str = "gram"
    input_rows: int = 20
    input_cols: int = 5
    # trust profile and share assignment (evaluation indices, 0-based)
    unreliable: tuple | None = None  # None: every worker is unreliable
    assignment: tuple | None = None  # None: identity mapping
    # threat
    byzantine_count: int = 0
    byzantine_locations: tuple | None = None  # None: resampled per trial
    base_matrix: str = "all-one"
    weak_zero_prob: float = 0.25
    noise_mean_re: float = 10.0
    noise_mean_im: float = 0.0
    noise_var: float = 1e3
    precision_mode: str = "synthetic"
    precision_var: float = 0.0
    # decoder
    decoder: bool = True
    error_count_mode: str = "oracle"
    rank_rel_tol: float = 1e-6
    localization: str = "independent"
    constraint_length: int | None = None
    # experiment
    trials: int = 100
    master_seed: int = 0

    def __post_init__(self):
        if self.function not in FUNCTIONS:
            raise ParameterError(f"unknown function {self.function!r}")
        if self.localization not in LOCALIZATION_MODES:
            raise ParameterError(f"localization must be one of {LOCALIZATION_MODES}")
        if self.base_matrix not in BASE_MATRIX_MODES:
            raise ParameterError(f"base_matrix must be one of {BASE_MATRIX_MODES}")
        if self.error_count_mode not in ("oracle", "rank"):
            raise ParameterError("error_count_mode must be 'oracle' or 'rank'")
        for name in ("unreliable", "assignment", "byzantine_locations"):
            idx = getattr(self, name)
            if idx is not None:
                if any(not 0 <= i < self.n_workers for i in idx):
                    raise ParameterError(f"{name} indices must lie in 0..N-1")
                if len(set(idx)) != len(idx):
                    raise ParameterError(f"{name} indices must be distinct")
        if self.byzantine_count > len(self.candidate_pool()):
            raise ParameterError("byzantine count exceeds the unreliable pool")
        self.encoding()  # validates K <= N

    def encoding(self) -> EncodingParams:
        return EncodingParams(
            n_workers=self.n_workers,
            k=self.k,
            t=self.t,
            degree=FUNCTIONS[self.function].degree,
            beta=self.beta,
            sigma_pad=self.sigma_pad,
        )

    def trust_profile(self) -> TrustProfile:
        unreliable = self.unreliable
        if unreliable is None:
            unreliable = tuple(range(self.n_workers))
        return TrustProfile(n_workers=self.n_workers, unreliable=tuple(unreliable))

    def candidate_pool(self) -> tuple:
        """Evaluation indices that unreliable workers hold."""
        if self.assignment is not None:
            return tuple(sorted(self.assignment))
        if self.unreliable is not None:
            return tuple(sorted(self.unreliable))
        return tuple(range(self.n_workers))

    @property
    def code_dimension(self) -> int:
        return self.encoding().code_dimension

    @property
    def capability(self) -> int:
        return (self.n_workers - self.code_dimension) // 2

    @property
    def output_entries(self) -> int:
        fn = FUNCTIONS[self.function]
        if fn.name == "gram":
            return self.input_cols * self.input_cols
        return self.input_rows * self.input_cols

    @property
    def noise_mean(self) -> complex:
        return complex(self.noise_mean_re, self.noise_mean_im)

    def with_updates(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)

    def digest(self) -> str:
        """Stable short hash identifying the scenario (excludes trial count)."""
        items = dataclasses.asdict(self)
        items.pop("trials")
        canonical = ";".join(f"{k}={items[k]!r}" for k in sorted(items))
        return hashlib.sha256(canonical.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class SweepSpec:
    """Grid axes layered over a base scenario; empty axes mean 'keep base'."""

    byzantine_counts: tuple = ()
    precision_vars: tuple = ()
    strategies: tuple = ()
    zero_probs: tuple = ()
    constraint_lengths: tuple = ()
    decoder_states: tuple = ()
    trials: int | None = None
    master_seed: int | None = None

    def grid(self, base: Scenario):
        """Yield (grid_index, scenario, label-dict) in deterministic order."""
        counts = self.byzantine_counts or (base.byzantine_count,)
        varis = self.precision_vars or (base.precision_var,)
        strats = self.strategies or (base.localization,)
        probs = self.zero_probs or (base.weak_zero_prob,)
        lengths = self.constraint_lengths or (base.constraint_length,)
        decoders = self.decoder_states or (base.decoder,)
        idx = 0
        for dec in decoders:
            for a in counts:
                for var in varis:
                    for strat in strats:
                        for p in probs:
                            for cl in lengths:
                                sc = base.with_updates(
                                    decoder=dec,
                                    byzantine_count=a,
                                    precision_var=var,
                                    localization=strat,
                                    weak_zero_prob=p,
                                    constraint_length=cl,
                                )
                                if self.trials is not None:
                                    sc = sc.with_updates(trials=self.trials)
                                if self.master_seed is not None:
                                    sc = sc.with_updates(master_seed=self.master_seed)
                                label = {
                                    "decoder": dec,
                                    "A": a,
                                    "precision_var": var,
                                    "strategy": strat if dec else "none",
                                    "zero_prob": p,
                                    "constraint_length": cl,
                                }
                                yield idx, sc, label
                                idx += 1


def _parse_tuple(raw: str, cast):
    items = [tok.strip() for tok in raw.replace(";", ",").split(",")]
    return tuple(cast(tok) for tok in items if tok)


_SCENARIO_CASTS = {
    "n_workers": int, "k": int, "t": int, "beta": float, "sigma_pad": float,
    "function": str, "input_rows": int, "input_cols": int,
    "byzantine_count": int, "base_matrix": str, "weak_zero_prob": float,
    "noise_mean_re": float, "noise_mean_im": float, "noise_var": float,
    "precision_mode": str, "precision_var": float,
    "error_count_mode": str, "rank_rel_tol": float,
    "localization": str, "trials": int, "master_seed": int,
}
_SCENARIO_TUPLES = {"unreliable", "assignment", "byzantine_locations"}


def load_config(path) -> tuple[Scenario, SweepSpec]:
    """Read a scenario (and optional sweep grid) from a config file."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    read = parser.read(path)
    if not read:
        raise FileNotFoundError(f"config file not found: {path}")
    if "scenario" not in parser:
        raise ParameterError("config needs a [scenario] section")

    fields: dict = {}
    section = parser["scenario"]
    for key, raw in section.items():
        if key in _SCENARIO_TUPLES:
            fields[key] = _parse_tuple(raw, int) or None
        elif key == "decoder":
            fields[key] = section.getboolean(key)
        elif key == "constraint_length":
            fields[key] = int(raw) if raw.strip() else None
        elif key in _SCENARIO_CASTS:
            fields[key] = _SCENARIO_CASTS[key](raw)
        else:
            raise ParameterError(f"unknown scenario key {key!r}")
    scenario = Scenario(**fields)

    sweep = SweepSpec()
    if "sweep" in parser:
        sec = parser["sweep"]
        kwargs: dict = {}
        for key, raw in sec.items():
            if key == "byzantine_counts":
                kwargs[key] = _parse_tuple(raw, int)
            elif key == "precision_vars":
                kwargs[key] = _parse_tuple(raw, float)
            elif key == "strategies":
                kwargs[key] = _parse_tuple(raw, str)
            elif key == "zero_probs":
                kwargs[key] = _parse_tuple(raw, float)
            elif key == "constraint_lengths":
                kwargs[key] = _parse_tuple(raw, int)
            elif key == "decoder_states":
                kwargs[key] = tuple(
                    tok.lower() in ("1", "true", "yes", "on")
                    for tok in raw.replace(";", ",").split(",")
                    if tok.strip()
                )
            elif key == "trials":
                kwargs[key] = int(raw)
            elif key == "master_seed":
                kwargs[key] = int(raw)
            else:
                raise ParameterError(f"unknown sweep key {key!r}")
        sweep = SweepSpec(**kwargs)
    return scenario, sweep
