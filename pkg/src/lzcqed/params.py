"""Model parameters, validation, and the unit conventions shared by all modules.

Natural units are used throughout: hbar = 1 and the oscillator frequency
Omega = 1 set the scales.  Couplings and damping rates are quoted in units
of Omega, the sweep velocity in units of Omega^2, temperature as kB*T in
units of hbar*Omega, and times in units of 1/Omega.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path


class DxpPolicy(enum.Enum):
    """Treatment of the cross-diffusion coefficient.

    ``Zero`` drops it entirely (the renormalized choice, which reproduces the
    exact equilibrium variance of the damped oscillator at every temperature).
    ``MatsubaraSum`` evaluates the Drude-regularized Matsubara sum; it is kept
    for sensitivity studies only.
    """

    Zero = "Zero"
    MatsubaraSum = "MatsubaraSum"


class ParameterError(ValueError):
    """Raised when one or more parameter invariants are violated.

    Carries a list of (field, message) pairs so every violation is reported
    individually.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = [f"{name}: {msg}" for name, msg in self.violations]
        super().__init__("invalid parameters:\n  " + "\n  ".join(lines))


def lz_transition_duration(g: float, v: float, omega: float = 1.0) -> float:
    """Duration of a single sweep through an avoided crossing.

    tau_LZ = max(1, sqrt(delta0^2/v)) / sqrt(v) with delta0 = 2g the smallest
    splitting.  Used to size the default time window.
    """
    delta0 = 2.0 * g
    return max(1.0, math.sqrt(delta0 * delta0 / v)) / math.sqrt(v)


def default_window(g: float, v: float, omega: float = 1.0) -> float:
    """Half-width of the default symmetric sweep window.

    Covers both avoided crossings at t = -/+ omega/v with settling margin:
    max(20/v, 10*tau_LZ).
    """
    return max(20.0 * omega / v, 10.0 * lz_transition_duration(g, v, omega))


def default_n_trunc(temperature: float) -> int:
    """Default oscillator-basis truncation: 16 is ample for kB*T <= 2."""
    if temperature <= 2.0:
        return 16
    return max(16, int(math.ceil(8.0 * temperature)))


@dataclass(frozen=True)
class SystemParams:
    """Dimensionless parameters of a qubit-oscillator-bath sweep.

    Fields
    ------
    g            qubit-oscillator coupling (units of Omega)
    omega        oscillator frequency; fixed to 1 internally, kept explicit
    v            sweep velocity (units of Omega^2)
    gamma        oscillator-bath damping rate (units of Omega), < 2*omega
    temperature  kB*T in units of hbar*Omega
    drude_cutoff high-frequency Drude cutoff (units of Omega)
    n_trunc      oscillator-basis truncation
    t_start, t_end  sweep window (units of 1/Omega); 0 means "use default"
    matsubara_terms truncation of the Matsubara sum
    dxp_policy   cross-diffusion treatment
    """

    g: float
    v: float
    gamma: float = 0.0
    temperature: float = 0.0
    omega: float = 1.0
    drude_cutoff: float = 50.0
    n_trunc: int = 0
    t_start: float = 0.0
    t_end: float = 0.0
    matsubara_terms: int = 10_000
    dxp_policy: DxpPolicy = DxpPolicy.Zero

    def with_defaults(self) -> "SystemParams":
        """Fill zero-valued window and truncation fields from the default policies."""
        out = self
        if out.n_trunc == 0:
            out = replace(out, n_trunc=default_n_trunc(out.temperature))
        if out.t_start == 0.0 and out.t_end == 0.0 and out.v > 0.0:
            half = default_window(out.g, out.v, out.omega)
            out = replace(out, t_start=-half, t_end=half)
        return out


@dataclass(frozen=True)
class ValidatedParams:
    """A validated parameter set plus any non-fatal warnings."""

    params: SystemParams
    warnings: tuple[str, ...] = field(default=())

    def __getattr__(self, name):
        # Delegate field access so a ValidatedParams can be used in place of
        # the raw SystemParams everywhere downstream.  Dunder lookups must
        # fail normally or pickling would recurse.
        if name.startswith("__"):
            raise AttributeError(name)
        return getattr(object.__getattribute__(self, "params"), name)


def validate(params) -> ValidatedParams:
    """Check every invariant and collect non-fatal physics warnings.

    Raises ParameterError listing all violated invariants; otherwise returns
    a ValidatedParams wrapping the (default-completed) parameters.  Validation
    is idempotent: validate(validate(p)) == validate(p).
    """
    if isinstance(params, ValidatedParams):
        params = params.params
    p = params.with_defaults()
    bad = []
    if p.g < 0.0:
        bad.append(("g", f"coupling must be >= 0, got {p.g}"))
    if p.v <= 0.0:
        bad.append(("v", f"sweep velocity must be > 0, got {p.v}"))
    if p.omega <= 0.0:
        bad.append(("omega", f"oscillator frequency must be > 0, got {p.omega}"))
    if p.gamma < 0.0:
        bad.append(("gamma", f"damping must be >= 0, got {p.gamma}"))
    elif p.omega > 0.0 and p.gamma >= 2.0 * p.omega:
        bad.append(("gamma", f"overdamped regime excluded: gamma = {p.gamma} "
                             f">= 2*omega = {2.0 * p.omega}"))
    if p.temperature < 0.0:
        bad.append(("temperature", f"temperature must be >= 0, got {p.temperature}"))
    if p.n_trunc < 2:
        bad.append(("n_trunc", f"need at least 2 oscillator states, got {p.n_trunc}"))
    if not (p.t_start < 0.0 < p.t_end):
        bad.append(("t_start", f"window must straddle t = 0, got "
                               f"[{p.t_start}, {p.t_end}]"))
    elif p.v > 0.0:
        margin = 10.0 * p.omega
        if abs(p.v * p.t_start) < margin or abs(p.v * p.t_end) < margin:
            bad.append(("t_start", f"|v*t| must reach {margin} at both window edges "
                                   f"to cover the crossings, got "
                                   f"{abs(p.v * p.t_start):.3g} and {abs(p.v * p.t_end):.3g}"))
    if p.dxp_policy is DxpPolicy.MatsubaraSum:
        if p.drude_cutoff < 10.0 * p.omega:
            bad.append(("drude_cutoff", f"Matsubara evaluation needs cutoff >= "
                                        f"10*omega, got {p.drude_cutoff}"))
        if p.matsubara_terms < 1:
            bad.append(("matsubara_terms", "need at least one Matsubara term"))
    if bad:
        raise ParameterError(bad)

    warnings = []
    if p.g > 0.0 and p.temperature >= p.omega**2 / p.g:
        warnings.append(
            f"independent-crossing formula untrustworthy: kB*T = {p.temperature} "
            f">= omega^2/g = {p.omega**2 / p.g:.6g}")
    if p.n_trunc < 4.0 + 6.0 * p.temperature:
        warnings.append(
            f"thermal tail truncation risk: n_trunc = {p.n_trunc} "
            f"< 4 + 6*T = {4.0 + 6.0 * p.temperature:.6g}")
    return ValidatedParams(p, tuple(warnings))


_FIELD_TYPES = {f.name: f.type for f in fields(SystemParams)}
_INT_FIELDS = {"n_trunc", "matsubara_terms"}
_FLOAT_FIELDS = {"g", "omega", "v", "gamma", "temperature", "drude_cutoff",
                 "t_start", "t_end"}


def parse_config(text: str) -> SystemParams:
    """Parse the flat key = value configuration format.

    One pair per line, '#' starts a comment, keys are exactly the SystemParams
    field names.  Unknown keys are an error.
    """
    values = {}
    errors = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append((f"line {lineno}", f"expected 'key = value', got {raw!r}"))
            continue
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key in _FLOAT_FIELDS:
            try:
                values[key] = float(val)
            except ValueError:
                errors.append((key, f"not a number: {val!r}"))
        elif key in _INT_FIELDS:
            try:
                values[key] = int(val)
            except ValueError:
                errors.append((key, f"not an integer: {val!r}"))
        elif key == "dxp_policy":
            try:
                values[key] = DxpPolicy(val)
            except ValueError:
                errors.append((key, f"unknown policy {val!r}; choose Zero or MatsubaraSum"))
        else:
            errors.append((key, "unknown key"))
    if errors:
        raise ParameterError(errors)
    missing = [k for k in ("g", "v") if k not in values]
    if missing:
        raise ParameterError([(k, "required key missing") for k in missing])
    return SystemParams(**values)


def load_config(path) -> SystemParams:
    """Read a configuration file; see parse_config for the format."""
    return parse_config(Path(path).read_text())
