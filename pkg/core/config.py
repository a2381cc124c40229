"""
Config Module
Flat dotted-key experiment documents: parsing, validation and the resolved ExperimentConfig
"""

import dataclasses
import hashlib
import json
import logging
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .counting import CountingModel
from .dependence import BivariateClaimModel, DependenceModel
from .errors import ConfigError, TreatyLabError
from .limitlaws import DEFAULT_TRUNCATION
from .marginals import MarginalModel
from .treaties import TreatySpec

logger = logging.getLogger(__name__)

SAMPLING_PATHS = ("full", "renyi")
_LINE_RE = re.compile(r"line (\d+)")


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class MarginalSection(_Section):
    family: Literal["pareto", "bounded_power", "exponential", "exp_tail"]
    alpha: Optional[float] = Field(default=None, gt=0)
    omega: Optional[float] = None
    shift: Optional[float] = Field(default=None, ge=0)


class ClaimsSection(_Section):
    x: MarginalSection
    y: Optional[MarginalSection] = None


class DependenceSection(_Section):
    kind: Literal["independence", "gumbel_hougaard", "gaussian"] = "independence"
    theta: float = Field(default=1.0, ge=1.0)
    rho: float = Field(default=0.0, gt=-1.0, lt=1.0)


class CountingSection(_Section):
    kind: Literal["deterministic", "poisson", "mixed_poisson"] = "poisson"
    rate: float = Field(default=1.0, gt=0, alias="lambda")
    gamma_shape: Optional[float] = Field(default=None, gt=0)
    gamma_rate: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _mixing_parameters(self):
        if self.kind == "mixed_poisson" and (self.gamma_shape is None or self.gamma_rate is None):
            raise ValueError("mixed_poisson needs gamma_shape and gamma_rate")
        return self


class _TreatySection(_Section):
    scheme: Optional[Literal["lcr", "ecomor"]] = None
    coeffs: Optional[List[float]] = None

    @model_validator(mode="after")
    def _scheme_or_coeffs(self):
        if (self.scheme is None) == (self.coeffs is None):
            raise ValueError("give exactly one of scheme or coeffs")
        return self


class Treaty1Section(_TreatySection):
    p: Optional[int] = Field(default=None, ge=1)


class Treaty2Section(_TreatySection):
    q: Optional[int] = Field(default=None, ge=1)


class SamplingSection(_Section):
    path: Literal["full", "renyi"] = "full"


class ExperimentDocument(_Section):
    """Validated form of the config text, before domain objects are built"""
    claims: ClaimsSection
    dependence: DependenceSection = DependenceSection()
    counting: CountingSection = CountingSection()
    treaty1: Treaty1Section
    treaty2: Optional[Treaty2Section] = None
    horizons: List[float] = Field(min_length=1)
    replicates: int = Field(ge=1)
    limit_draws: int = Field(default=10_000, ge=1)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    truncation: int = Field(default=DEFAULT_TRUNCATION, ge=1)
    output: Optional[str] = None
    sampling: SamplingSection = SamplingSection()
    threads: int = Field(default=1, ge=1)

    @field_validator("horizons")
    @classmethod
    def _positive_ascending(cls, horizons: List[float]) -> List[float]:
        if any(t <= 1 for t in horizons):
            raise ValueError("horizons must exceed 1 (norming constants need t > 1)")
        if any(b <= a for a, b in zip(horizons, horizons[1:])):
            raise ValueError("horizons must be strictly ascending")
        return horizons


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Resolved experiment: domain models plus run parameters.

    `document` is the canonical dictionary the run digest is computed from.
    """
    claims: BivariateClaimModel
    counting: CountingModel
    treaty1: TreatySpec
    treaty2: TreatySpec
    horizons: Tuple[float, ...]
    replicates: int
    limit_draws: int = 10_000
    seed: int = 0
    truncation: int = DEFAULT_TRUNCATION
    output: Optional[str] = None
    sampling_path: str = "full"
    threads: int = 1
    document: Dict[str, Any] = dataclasses.field(default_factory=dict, compare=False)

    @property
    def depth(self) -> int:
        return max(self.treaty1.p, self.treaty2.p)

    def with_overrides(self, seed: Optional[int] = None, threads: Optional[int] = None,
                       output: Optional[str] = None) -> "ExperimentConfig":
        """Copy with CLI overrides applied (None keeps the file value)"""
        changes: Dict[str, Any] = {}
        if seed is not None:
            if not 0 <= int(seed) < 2 ** 64:
                raise ConfigError(f"seed must fit in 64 unsigned bits, got {seed}", key="seed")
            changes["seed"] = int(seed)
        if threads is not None:
            if int(threads) < 1:
                raise ConfigError(f"threads must be >= 1, got {threads}", key="threads")
            changes["threads"] = int(threads)
        if output is not None:
            changes["output"] = str(output)
        if not changes:
            return self
        document = dict(self.document)
        document.update(changes)
        return dataclasses.replace(self, document=document, **changes)

    def digest(self) -> str:
        """sha256 of the canonical config JSON (thread count and output path excluded)"""
        canonical = {k: v for k, v in self.document.items() if k not in ("threads", "output")}
        payload = json.dumps(canonical, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _line_of(text: str, key: str) -> Optional[int]:
    """1-based line where a dotted key (or its last segment) is assigned"""
    leaf = key.rsplit(".", 1)[-1]
    patterns = [
        re.compile(rf"^\s*{re.escape(key)}\s*="),
        re.compile(rf"^\s*{re.escape(key)}\."),
        re.compile(rf"^\s*{re.escape(leaf)}\s*="),
    ]
    lines = text.splitlines()
    for pattern in patterns:
        for number, line in enumerate(lines, start=1):
            if pattern.match(line):
                return number
    return None


# keys each kind reads; anything else given explicitly is rejected
_APPLICABLE_KEYS = {
    "pareto": {"family", "alpha"},
    "bounded_power": {"family", "alpha", "omega"},
    "exponential": {"family"},
    "exp_tail": {"family", "shift"},
    "independence": {"kind"},
    "gumbel_hougaard": {"kind", "theta"},
    "gaussian": {"kind", "rho"},
    "deterministic": {"kind", "rate"},
    "poisson": {"kind", "rate"},
    "mixed_poisson": {"kind", "gamma_shape", "gamma_rate"},
}


def _reject_inapplicable(section: BaseModel, choice: str, prefix: str, text: str) -> None:
    extra = sorted(section.model_fields_set - _APPLICABLE_KEYS[choice])
    if extra:
        alias = type(section).model_fields[extra[0]].alias or extra[0]
        key = f"{prefix}.{alias}"
        raise ConfigError(f"does not apply to {choice!r}", key=key, line=_line_of(text, key))


def _first_error(exc: ValidationError, text: str) -> ConfigError:
    err = exc.errors()[0]
    key = ".".join(str(part) for part in err["loc"]) or None
    message = err["msg"]
    if err["type"] == "extra_forbidden":
        message = "unknown key"
    elif err["type"] == "missing":
        message = "required key is missing"
    return ConfigError(message, key=key, line=_line_of(text, key) if key else None)


def _treaty(section: _TreatySection, depth_key: str, name: str, text: str) -> TreatySpec:
    params = section.model_dump(exclude_none=True)
    if "coeffs" in params and depth_key in params and len(params["coeffs"]) != params[depth_key]:
        raise ConfigError(f"{depth_key} = {params[depth_key]} disagrees with {len(params['coeffs'])} coeffs",
                          key=f"{name}.{depth_key}", line=_line_of(text, f"{name}.{depth_key}"))
    try:
        return TreatySpec.from_dict(params, depth_key=depth_key)
    except TreatyLabError as e:
        raise ConfigError(str(e), key=name, line=_line_of(text, name + ".scheme")) from e


def parse_config(text: str) -> ExperimentConfig:
    """
    Parse and validate an experiment document.

    Args:
        text: Flat dotted-key TOML text, e.g. `counting.kind = "poisson"`

    Returns:
        ExperimentConfig with every cross-field rule checked

    Raises:
        ConfigError: syntax error (with line) or a violated rule (with key)
    """
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        match = _LINE_RE.search(str(e))
        raise ConfigError(f"syntax error: {e}", line=int(match.group(1)) if match else None) from e

    try:
        doc = ExperimentDocument.model_validate(raw)
    except ValidationError as e:
        raise _first_error(e, text) from e

    _reject_inapplicable(doc.claims.x, doc.claims.x.family, "claims.x", text)
    if doc.claims.y is not None:
        _reject_inapplicable(doc.claims.y, doc.claims.y.family, "claims.y", text)
    _reject_inapplicable(doc.dependence, doc.dependence.kind, "dependence", text)
    _reject_inapplicable(doc.counting, doc.counting.kind, "counting", text)

    try:
        marginal_x = MarginalModel.from_dict(doc.claims.x.model_dump(exclude_none=True))
        if doc.claims.y is None:
            logger.info("claims.y not given; using claims.x")
            marginal_y = marginal_x
        else:
            marginal_y = MarginalModel.from_dict(doc.claims.y.model_dump(exclude_none=True))
    except TreatyLabError as e:
        raise ConfigError(str(e), key="claims", line=_line_of(text, "claims.x.family")) from e

    dependence = DependenceModel.from_dict(doc.dependence.model_dump())
    counting = CountingModel.from_dict(doc.counting.model_dump(by_alias=True, exclude_none=True))

    treaty1 = _treaty(doc.treaty1, "p", "treaty1", text)
    if doc.treaty2 is None:
        logger.info("treaty2 not given; using treaty1")
        treaty2 = treaty1
    else:
        treaty2 = _treaty(doc.treaty2, "q", "treaty2", text)

    if doc.sampling.path == "renyi" and not dependence.is_independent:
        raise ConfigError("renyi sampling draws the two components independently; "
                          "use sampling.path = \"full\" with a dependence copula",
                          key="sampling.path", line=_line_of(text, "sampling.path"))
    if doc.truncation < max(treaty1.p, treaty2.p):
        raise ConfigError(f"truncation must be >= max(p, q) = {max(treaty1.p, treaty2.p)}",
                          key="truncation", line=_line_of(text, "truncation"))

    document = doc.model_dump(mode="json", by_alias=True)
    document["claims"]["y"] = marginal_y.describe()
    document["treaty2"] = {"coeffs": list(treaty2.coeffs)}
    document["treaty1"] = {"coeffs": list(treaty1.coeffs)}

    return ExperimentConfig(
        claims=BivariateClaimModel(marginal_x, marginal_y, dependence),
        counting=counting,
        treaty1=treaty1,
        treaty2=treaty2,
        horizons=tuple(float(t) for t in doc.horizons),
        replicates=doc.replicates,
        limit_draws=doc.limit_draws,
        seed=doc.seed,
        truncation=doc.truncation,
        output=doc.output,
        sampling_path=doc.sampling.path,
        threads=doc.threads,
        document=document,
    )


def load_config(path: str) -> ExperimentConfig:
    """
    Read and parse a config file.

    Raises:
        OSError: unreadable file, with the path
        ConfigError: invalid document, including text that is not UTF-8
    """
    with open(path, "rb") as f:
        data = f.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        line = data[:e.start].count(b"\n") + 1
        raise ConfigError(f"config is not valid UTF-8 (byte 0x{data[e.start]:02x} at offset {e.start})",
                          line=line) from e
    return parse_config(text)
