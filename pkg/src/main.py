"""
Main orchestration system for the soliton curvature verification suite.
Coordinates pointwise tensor checks, integral identities, rigidity diagnostics
and the variational layer over the soliton catalog, and writes the report.
"""

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import (
    CATALOG_SOLITONS,
    DEFAULT_C_VALUES,
    DEFAULT_CHECKS,
    DEFAULT_R_OFFSETS,
    DEFAULT_RESOLUTION,
    DEFAULT_RIGIDITY_R,
    DEFAULT_STABILITY_GRID,
    DEFAULT_STABILITY_MU0,
    DEFAULT_STABILITY_R,
    DEFAULT_TOLERANCE,
    DEFAULT_VARIATION_MODEL,
    DEFAULT_VARIATION_PARAMS,
    GRADIENT_PAIRING_FLOOR,
    IDENTITY_IDS,
    LOG_FORMAT,
    LOG_LEVEL,
    LOGS_DIR,
    MIN_RESOLUTION,
    RANDOM_SEED,
    RESULTS_DIR,
    SUITE_CHECKS,
    TOOL_VERSION,
)
from src.geometry.curvature_tensors import ParameterPair
from src.models.soliton_catalog import MODEL_NAMES, catalog_model
from src.processing.integral_verifier import IntegralVerifier, identity_uses_c
from src.processing.pointwise_suite import TENSOR_NAMES, evaluate_at, run_pointwise_suite
from src.processing.variational import (
    first_variation_check,
    flat_second_variation_check,
    gradient_test_fields,
    linearization_consistency,
    reference_flat_mode,
    second_variation_R2,
    stability_scan,
)
from src.utils.errors import ConfigError, VerificationError
from src.utils.quadrature import QuadratureSpec
from src.utils.reporting import IDENTITY_COLUMNS, STABILITY_COLUMNS, load_report, to_jsonable, write_csv, write_json

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("json", "csv")
VERDICTS = ("pass", "fail", "vacuous")
FULL_MANIFOLD = "full"
RValue = Union[float, str]


def setup_logging(level: str = LOG_LEVEL):
    """Console and file logging; the log directory is created on demand."""
    os.makedirs(LOGS_DIR, exist_ok=True)
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=[
            logging.FileHandler(os.path.join(LOGS_DIR, 'soliton_verification.log')),
            logging.StreamHandler()
        ]
    )


def parse_rational(text) -> float:
    """Exact rational ("1/3", "-2", "0.25") rounded once to the nearest float."""
    try:
        return float(Fraction(str(text).strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: '{text}'")


def parse_r(text) -> RValue:
    if str(text).strip().lower() == FULL_MANIFOLD:
        return FULL_MANIFOLD
    return parse_rational(text)


def parse_point(text: str) -> List[float]:
    values = [parse_rational(part) for part in str(text).split(",")]
    if len(values) != 4:
        raise argparse.ArgumentTypeError(f"a chart point needs four coordinates, got '{text}'")
    return values


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass
class SuiteConfig:
    """
    One suite definition. Models, ids and parameters are validated before any computation.

    r_values overrides r_offsets (r = min f + offset) when given; "full" selects the
    full-manifold limit. alphas and betas are zipped into (alpha, beta) pairs.
    """
    checks: List[str] = field(default_factory=lambda: list(DEFAULT_CHECKS))
    models: List[str] = field(default_factory=lambda: list(CATALOG_SOLITONS))
    identities: List[str] = field(default_factory=lambda: list(IDENTITY_IDS))
    r_offsets: List[float] = field(default_factory=lambda: list(DEFAULT_R_OFFSETS))
    r_values: List[RValue] = field(default_factory=list)
    c_values: List[float] = field(default_factory=lambda: list(DEFAULT_C_VALUES))
    rigidity_r: List[float] = field(default_factory=lambda: list(DEFAULT_RIGIDITY_R))
    alphas: List[float] = field(default_factory=list)
    betas: List[float] = field(default_factory=list)
    mu0: float = DEFAULT_STABILITY_MU0
    scalar_R: float = DEFAULT_STABILITY_R
    variation_model: str = DEFAULT_VARIATION_MODEL
    resolution: int = DEFAULT_RESOLUTION
    tolerance: float = DEFAULT_TOLERANCE
    output_format: str = "json"
    out: Optional[str] = None

    @property
    def parameter_pairs(self) -> List[Tuple[float, float]]:
        return list(zip(self.alphas, self.betas))

    @property
    def stability_grid(self) -> List[Tuple[float, float]]:
        return self.parameter_pairs or list(DEFAULT_STABILITY_GRID)

    @property
    def variation_params(self) -> List[Tuple[float, float]]:
        return self.parameter_pairs or list(DEFAULT_VARIATION_PARAMS)

    def r_list(self, min_f: float) -> List[Optional[float]]:
        """Sublevel values for one model; None stands for the full manifold."""
        if self.r_values:
            return [None if r == FULL_MANIFOLD else float(r) for r in self.r_values]
        return [min_f + offset for offset in self.r_offsets]

    def validate(self):
        """
        Raises:
            ConfigError: on the first invalid entry
        """
        unknown = [check for check in self.checks if check not in SUITE_CHECKS]
        if unknown or not self.checks:
            raise ConfigError(f"unknown checks {unknown}; expected some of {', '.join(SUITE_CHECKS)}")
        for name in self.models + [self.variation_model]:
            if name not in MODEL_NAMES:
                raise ConfigError(f"unknown model '{name}'; expected one of {', '.join(MODEL_NAMES)}")
        for identity in self.identities:
            if identity not in IDENTITY_IDS:
                raise ConfigError(f"unknown identity '{identity}'; expected one of {', '.join(IDENTITY_IDS)}")
        if {"integrals", "rigidity", "decay"} & set(self.checks):
            for name in self.models:
                if not catalog_model(name).is_soliton:
                    raise ConfigError(f"model '{name}' carries no potential; integral checks need a soliton")
        if catalog_model(self.variation_model).reduction.kind != "periodic":
            raise ConfigError(f"variation model must be a torus, got '{self.variation_model}'")
        for r in self.r_values:
            if r != FULL_MANIFOLD and not isinstance(r, (int, float)):
                raise ConfigError(f"r must be a number or '{FULL_MANIFOLD}', got {r!r}")
        if any(c <= 0.0 for c in self.c_values) or not self.c_values:
            raise ConfigError(f"c values must be positive, got {self.c_values}")
        if any(not 0.0 < r < 1.0 for r in self.rigidity_r):
            raise ConfigError(f"rigidity r values must lie in (0, 1), got {self.rigidity_r}")
        if len(self.alphas) != len(self.betas):
            raise ConfigError(f"--alpha and --beta must be given the same number of times "
                              f"({len(self.alphas)} vs {len(self.betas)})")
        if any(a == 0.0 and b == 0.0 for a, b in self.parameter_pairs):
            raise ConfigError("(alpha, beta) = (0, 0) has no Bach-like tensor")
        if self.resolution < MIN_RESOLUTION:
            raise ConfigError(f"resolution must be at least {MIN_RESOLUTION}, got {self.resolution}")
        if self.tolerance <= 0.0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"unknown format '{self.output_format}'; expected json or csv")


# JSON config keys mirror the CLI flag names
FLAG_FIELDS = {
    "check": "checks",
    "model": "models",
    "identity": "identities",
    "r-offset": "r_offsets",
    "r": "r_values",
    "c": "c_values",
    "rigidity-r": "rigidity_r",
    "alpha": "alphas",
    "beta": "betas",
    "mu0": "mu0",
    "scalar-R": "scalar_R",
    "variation-model": "variation_model",
    "res": "resolution",
    "tol": "tolerance",
    "format": "output_format",
    "out": "out",
}
LIST_FIELDS = {"checks", "models", "identities", "r_offsets", "r_values", "c_values", "rigidity_r", "alphas", "betas"}
NUMBER_FIELDS = {"r_offsets", "c_values", "rigidity_r", "alphas", "betas", "mu0", "scalar_R", "tolerance"}


def _coerce(name: str, value):
    try:
        if name in LIST_FIELDS and not isinstance(value, list):
            value = [value]
        if name == "r_values":
            return [parse_r(v) for v in value]
        if name in NUMBER_FIELDS:
            return [parse_rational(v) for v in value] if isinstance(value, list) else parse_rational(value)
        if name == "resolution":
            return int(value)
    except (argparse.ArgumentTypeError, TypeError, ValueError) as e:
        raise ConfigError(f"invalid value for '{name}': {e}")
    return value


def load_config_file(path: str) -> Dict[str, object]:
    try:
        with open(path) as f:
            document = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config file '{path}': {e}")
    if not isinstance(document, dict):
        raise ConfigError(f"config file '{path}' must hold a JSON object")
    values = {}
    for key, value in document.items():
        if key not in FLAG_FIELDS:
            raise ConfigError(f"unknown config key '{key}'; expected flag names {', '.join(FLAG_FIELDS)}")
        name = FLAG_FIELDS[key]
        values[name] = _coerce(name, value)
    return values


def build_config(file_values: Optional[Dict[str, object]] = None,
                 flag_values: Optional[Dict[str, object]] = None) -> SuiteConfig:
    """config.py defaults, then file values, then flags; the result is validated."""
    merged: Dict[str, object] = {}
    merged.update(file_values or {})
    merged.update({name: _coerce(name, value) for name, value in (flag_values or {}).items() if value is not None})
    config = SuiteConfig(**merged)
    config.validate()
    return config


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    check: str
    target: str
    params: Dict[str, object]
    verdict: str
    result: Optional[Dict[str, object]] = None
    error: Optional[str] = None


@dataclass
class SuiteReport:
    version: str
    config: Dict[str, object]
    results: List[CheckResult] = field(default_factory=list)
    summary: Dict[str, int] = field(default_factory=lambda: {verdict: 0 for verdict in VERDICTS})
    narrative: List[str] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def exit_code(self) -> int:
        return 0 if self.summary.get("fail", 0) == 0 else 1


class VerificationSuiteOrchestrator:
    """
    Main orchestrator for the soliton verification suite.

    Coordinates:
    1. Pointwise tensor checks on each model
    2. Integral identities over sublevel sets and the full manifold
    3. Stokes self-test of the quadrature layer
    4. Rigidity kernels and hypothesis-instance narrative
    5. Decay and torus energy probes
    6. Stability scan and variational finite-difference checks
    """

    def __init__(self, config: SuiteConfig):
        """
        Initialize the orchestrator.

        Args:
            config (SuiteConfig): validated suite definition
        """
        self.config = config
        self.quad = QuadratureSpec(resolution=config.resolution)
        self.verifier = IntegralVerifier(self.quad)
        self.report: Optional[SuiteReport] = None

    def _record(self, check: str, target: str, params: Dict[str, object],
                compute: Callable[[], Tuple[str, object]]) -> CheckResult:
        """Run one check; any exception becomes a failed result and the suite continues."""
        try:
            verdict, payload = compute()
            result = CheckResult(check=check, target=target, params=params, verdict=verdict,
                                 result=to_jsonable(payload))
        except Exception as e:
            return self._record_error(check, target, params, e)
        return self._append(result)

    def _record_error(self, check: str, target: str, params: Dict[str, object], error: Exception) -> CheckResult:
        logger.error(f"{check} on {target} {params}: {type(error).__name__}: {error}")
        return self._append(CheckResult(check=check, target=target, params=params, verdict="fail",
                                        result={'error': str(error)}, error=type(error).__name__))

    def _append(self, result: CheckResult) -> CheckResult:
        self.report.results.append(result)
        self.report.summary[result.verdict] = self.report.summary.get(result.verdict, 0) + 1
        return result

    # -- phases ---------------------------------------------------------------

    def run_pointwise(self):
        for name in self.config.models:
            try:
                checks = run_pointwise_suite(catalog_model(name))
            except Exception as e:
                self._record_error("pointwise", name, {}, e)
                continue
            for check in checks:
                self._record("pointwise", name, {"check": check.check}, lambda check=check: (check.verdict, check))

    def run_integrals(self):
        for name in self.config.models:
            model = catalog_model(name)
            for identity in self.config.identities:
                c_values = self.config.c_values if identity_uses_c(identity) else self.config.c_values[:1]
                for r in self.config.r_list(model.min_f):
                    for c in c_values:
                        params = {"r": FULL_MANIFOLD if r is None else r}
                        if identity_uses_c(identity):
                            params["c"] = c

                        def compute(identity=identity, r=r, c=c):
                            report = self.verifier.verify_identity(identity, model, r, c, self.config.tolerance)
                            return report.verdict, report

                        self._record(f"identity:{identity}", name, params, compute)

    def run_stokes(self):
        def compute():
            report = self.verifier.stokes_selftest()
            return report.verdict, report

        self._record("stokes", "torus+ball", {"resolution": self.config.resolution}, compute)

    def run_rigidity(self):
        pairs = self.config.parameter_pairs or [None]
        c = self.config.c_values[0]
        for name in self.config.models:
            model = catalog_model(name)
            for r in self.config.rigidity_r:
                for pair in pairs:
                    params = {"r": r, "c": c}
                    if pair is not None:
                        params.update(alpha=pair[0], beta=pair[1])

                    def compute(r=r, pair=pair):
                        report = self.verifier.rigidity_integrand_report(
                            model, r, c, None if pair is None else ParameterPair(*pair), self.config.tolerance)
                        self.report.narrative.extend(f"{name} (r={r:g}): {line}" for line in report.narrative)
                        return report.verdict, report

                    self._record("rigidity", name, params, compute)

            if model.reduction.kind == "line" or (model.reduction.kind == "radial" and model.min_f > 0.0):
                r = model.min_f + 1.0

                def compute_series(r=r):
                    terms = self.verifier.rigidity_series(model, r, c, self.config.tolerance)
                    verdict = "pass" if all(term.verdict == "pass" for term in terms) else "fail"
                    return verdict, {"terms": terms}

                self._record("rigidity-series", name, {"r": r, "c": c}, compute_series)

    def run_decay(self):
        for name in self.config.models:
            model = catalog_model(name)
            r_values = [model.min_f + offset for offset in (1.0, 2.0, 4.0)]

            def compute(model=model, r_values=r_values):
                report = self.verifier.decay_probe(model, 1.0, r_values, self.config.tolerance)
                return report.verdict, report

            self._record("decay", name, {"alpha": 1.0, "r": r_values}, compute)

    def run_torus_energy(self):
        def compute():
            report = self.verifier.torus_gradient_energy(catalog_model("conformal-torus"))
            return report.verdict, report

        self._record("torus-energy", "conformal-torus", {}, compute)

    def run_stability(self):
        mu0, R = self.config.mu0, self.config.scalar_R
        try:
            verdicts = stability_scan(mu0, R, self.config.stability_grid)
        except Exception as e:
            self._record_error("stability", "spectral", {"mu0": mu0, "R": R}, e)
            return
        for pair, verdict in verdicts.items():
            self._record("stability", "spectral", {"alpha": pair.alpha, "beta": pair.beta, "mu0": mu0, "R": R},
                         lambda verdict=verdict: ("pass", verdict))
        for alpha, beta in self.config.stability_grid:
            def compute(alpha=alpha, beta=beta):
                report = linearization_consistency(alpha, beta, R)
                return ("pass" if "completed" in report.matching_forms else "fail"), report

            self._record("linearization", "spectral", {"alpha": alpha, "beta": beta, "R": R}, compute)

    def run_variation(self):
        model = catalog_model(self.config.variation_model)
        # the flat torus is critical for every F, so its pairings are all zero
        floor = 0.0 if model.name == "flat-torus" else GRADIENT_PAIRING_FLOOR
        for alpha, beta in self.config.variation_params:
            params = ParameterPair(alpha, beta)
            try:
                fields = gradient_test_fields(params, model, seed=RANDOM_SEED, floor=floor)
            except Exception as e:
                self._record_error("first-variation", model.name, {"alpha": alpha, "beta": beta}, e)
                continue
            for index, h in enumerate(fields):
                def compute(params=params, h=h):
                    report = first_variation_check(params, model, h)
                    return report.verdict, report

                self._record("first-variation", model.name, {"alpha": alpha, "beta": beta, "field": index}, compute)

        def compute_flat():
            report = flat_second_variation_check(1.0, reference_flat_mode())
            return report.verdict, report

        def compute_r2():
            report = second_variation_R2(catalog_model("flat-torus"), reference_flat_mode())
            return report.verdict, report

        self._record("flat-hessian", "flat-torus", {"alpha": 1.0, "beta": 0.0}, compute_flat)
        self._record("second-variation-R2", "flat-torus", {}, compute_r2)

    # -- driver ---------------------------------------------------------------

    def run_suite(self) -> SuiteReport:
        """
        Execute every requested check in config order.

        Returns:
            SuiteReport with summary counts and wall time
        """
        start = time.time()
        self.report = SuiteReport(version=TOOL_VERSION, config=to_jsonable(asdict(self.config)))

        logger.info("=" * 80)
        logger.info("STARTING SOLITON VERIFICATION SUITE")
        logger.info("=" * 80)
        logger.info(f"Checks: {', '.join(self.config.checks)}")
        logger.info(f"Models: {', '.join(self.config.models)}; resolution {self.config.resolution}")

        phases = {
            "pointwise": ("POINTWISE TENSOR CHECKS", self.run_pointwise),
            "integrals": ("INTEGRAL IDENTITIES", self.run_integrals),
            "stokes": ("STOKES SELF-TEST", self.run_stokes),
            "rigidity": ("RIGIDITY KERNELS", self.run_rigidity),
            "decay": ("DECAY PROBE", self.run_decay),
            "torus-energy": ("TORUS GRADIENT ENERGY", self.run_torus_energy),
            "stability": ("STABILITY SCAN", self.run_stability),
            "variation": ("VARIATIONAL CHECKS", self.run_variation),
        }
        step = 0
        for check in self.config.checks:
            title, run = phases[check]
            step += 1
            logger.info("\n" + "=" * 50)
            logger.info(f"STEP {step}: {title}")
            logger.info("=" * 50)
            before = len(self.report.results)
            run()
            logger.info(f"{title}: {len(self.report.results) - before} results")

        self.report.wall_time = time.time() - start
        logger.info("=" * 80)
        logger.info(f"SUITE COMPLETED in {self.report.wall_time:.1f}s: " + ", ".join(
            f"{verdict} {self.report.summary.get(verdict, 0)}" for verdict in VERDICTS))
        logger.info("=" * 80)
        return self.report

    def save_report(self, report: SuiteReport) -> List[str]:
        """Write the report in the configured format; returns the written paths."""
        out = self.config.out
        if out is None:
            stamp = datetime.now().strftime('%Y%m%d_%H%M%S')
            out = os.path.join(RESULTS_DIR, f"verification_report_{stamp}.{self.config.output_format}")
        if self.config.output_format == "json":
            return [write_json(report, out)]
        return write_csv_exports(to_jsonable(report), out)


def _identity_rows(results: Sequence[Dict]) -> List[Dict]:
    rows = []
    for item in results:
        if not item["check"].startswith("identity:"):
            continue
        row = dict(item.get("result") or {})
        if "lhs" not in row:
            row = {"identity": item["check"].split(":", 1)[1], "model": item["target"],
                   "params": item["params"], "verdict": item["verdict"]}
        rows.append(row)
    return rows


def _stability_rows(results: Sequence[Dict]) -> List[Dict]:
    return [item["result"] for item in results if item["check"] == "stability" and "inf" in (item["result"] or {})]


def write_csv_exports(report: Dict, out: str) -> List[str]:
    """Identity rows to `out`; stability rows to `out` when alone, else next to it with a _stability suffix."""
    identity_rows = _identity_rows(report["results"])
    stability_rows = _stability_rows(report["results"])
    paths = []
    if identity_rows or not stability_rows:
        paths.append(write_csv(identity_rows, IDENTITY_COLUMNS, out))
    if stability_rows:
        target = out if not identity_rows else os.path.splitext(out)[0] + "_stability.csv"
        paths.append(write_csv(stability_rows, STABILITY_COLUMNS, target))
    return paths


def print_summary(report: Dict):
    print("\n" + "=" * 80)
    print("SOLITON VERIFICATION SUMMARY")
    print("=" * 80)
    print(f"Version: {report['version']}")
    print(f"Results: {len(report['results'])}")
    for verdict in VERDICTS:
        print(f"  {verdict}: {report['summary'].get(verdict, 0)}")
    failures = [item for item in report["results"] if item["verdict"] == "fail"]
    if failures:
        print("\nFailed checks:")
        for item in failures:
            reason = (item.get("result") or {}).get("error", "")
            print(f"  - {item['check']} on {item['target']} {item['params']} {reason}".rstrip())
    hessians = [item for item in report["results"]
                if item["check"] == "flat-hessian" and "mismatch_predicted" in (item.get("result") or {})]
    if hessians:
        print("\nFlat Hessian (verdict is against the negated prediction):")
        for item in hessians:
            result = item["result"]
            print(f"  {item['verdict']}: fd {float(result['finite_difference']):.10g}, "
                  f"predicted {float(result['predicted']):.10g}, "
                  f"mismatch vs predicted {float(result['mismatch_predicted']):.3g}, "
                  f"vs negated {float(result['mismatch_negated']):.3g}")
    if report.get("narrative"):
        print("\nNarrative:")
        for line in report["narrative"]:
            print(f"  {line}")
    print(f"\nWall time: {report.get('wall_time', 0.0):.1f}s")
    print("=" * 80)


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------

SUBCOMMAND_CHECKS = {
    "verify": ["pointwise"],
    "integrals": ["integrals"],
    "rigidity": ["rigidity"],
    "stability": ["stability"],
    "variation": ["variation"],
}


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument('--config', default=None, help='JSON config file keyed by flag names')
    parser.add_argument('--res', type=int, default=None, help='Quadrature resolution')
    parser.add_argument('--tol', type=parse_rational, default=None, help='Relative tolerance')
    parser.add_argument('--format', choices=OUTPUT_FORMATS, default=None, help='Report format')
    parser.add_argument('--out', default=None, help='Report path')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Gradient shrinking soliton curvature verification')
    subparsers = parser.add_subparsers(dest='command', required=True)

    subparsers.add_parser('catalog', help='List catalog models and their oracles')

    evaluate = subparsers.add_parser('eval', help='Evaluate one tensor at one chart point')
    evaluate.add_argument('--model', required=True, choices=MODEL_NAMES)
    evaluate.add_argument('--tensor', required=True, choices=TENSOR_NAMES)
    evaluate.add_argument('--point', required=True, type=parse_point, help='Four coordinates, e.g. 1/2,0,0,1')
    evaluate.add_argument('--frame', choices=("orthonormal", "coordinate"), default="orthonormal")

    suite = subparsers.add_parser('suite', help='Run the configured suite')
    suite.add_argument('--check', action='append', choices=SUITE_CHECKS, default=None)
    suite.add_argument('--model', action='append', default=None)
    suite.add_argument('--identity', action='append', default=None)
    suite.add_argument('--r', action='append', type=parse_r, default=None)
    suite.add_argument('--c', action='append', type=parse_rational, default=None)
    suite.add_argument('--alpha', action='append', type=parse_rational, default=None)
    suite.add_argument('--beta', action='append', type=parse_rational, default=None)
    _add_common(suite)

    verify = subparsers.add_parser('verify', help='Pointwise suites')
    verify.add_argument('--model', action='append', default=None)
    _add_common(verify)

    integrals = subparsers.add_parser('integrals', help='Integral identity verification')
    integrals.add_argument('--model', action='append', default=None)
    integrals.add_argument('--identity', action='append', default=None)
    integrals.add_argument('--r', action='append', type=parse_r, default=None, help='Sublevel value or "full"')
    integrals.add_argument('--c', action='append', type=parse_rational, default=None)
    _add_common(integrals)

    rigidity = subparsers.add_parser('rigidity', help='Rigidity kernels over Omega_r, r in (0, 1)')
    rigidity.add_argument('--model', action='append', default=None)
    rigidity.add_argument('--r', action='append', type=parse_rational, default=None)
    rigidity.add_argument('--c', action='append', type=parse_rational, default=None)
    rigidity.add_argument('--alpha', action='append', type=parse_rational, default=None)
    rigidity.add_argument('--beta', action='append', type=parse_rational, default=None)
    _add_common(rigidity)

    stability = subparsers.add_parser('stability', help='Spectral stability scan')
    stability.add_argument('--alpha', action='append', type=parse_rational, default=None)
    stability.add_argument('--beta', action='append', type=parse_rational, default=None)
    stability.add_argument('--mu0', type=parse_rational, default=None)
    stability.add_argument('--scalar-R', dest='scalar_R', type=parse_rational, default=None)
    _add_common(stability)

    variation = subparsers.add_parser('variation', help='Finite-difference variational checks')
    variation.add_argument('--model', default=None, help='Torus model for the first variation')
    variation.add_argument('--alpha', action='append', type=parse_rational, default=None)
    variation.add_argument('--beta', action='append', type=parse_rational, default=None)
    _add_common(variation)

    report = subparsers.add_parser('report', help='Re-render a saved JSON report')
    report.add_argument('input', help='Saved report')
    report.add_argument('--format', choices=OUTPUT_FORMATS, default=None)
    report.add_argument('--out', default=None)
    return parser


def flag_values(args: argparse.Namespace) -> Dict[str, object]:
    """Namespace to SuiteConfig fields for a computing subcommand."""
    values: Dict[str, object] = {
        "resolution": args.res,
        "tolerance": args.tol,
        "output_format": args.format,
        "out": args.out,
    }
    for flag in ("identity", "c", "alpha", "beta", "mu0", "scalar_R", "check"):
        if hasattr(args, flag):
            values[FLAG_FIELDS.get(flag, flag)] = getattr(args, flag)
    if args.command in SUBCOMMAND_CHECKS:
        values["checks"] = SUBCOMMAND_CHECKS[args.command]
    if args.command == "variation":
        values["variation_model"] = args.model
    else:
        values["models"] = getattr(args, "model", None)
        if args.command == "verify" and getattr(args, "model", None) is None:
            values["models"] = list(MODEL_NAMES)
    if getattr(args, "r", None) is not None:
        values["rigidity_r" if args.command == "rigidity" else "r_values"] = args.r
    return values


def command_catalog() -> int:
    print("=" * 80)
    print("SOLITON CATALOG")
    print("=" * 80)
    for name in MODEL_NAMES:
        model = catalog_model(name)
        print(f"{name}: {model.description}")
        print(f"  soliton: {model.is_soliton}  compact: {model.compact}  min f: {model.min_f}  "
              f"reduction: {model.reduction.kind}")
        if model.oracles:
            print(f"  oracles: {', '.join(model.oracles)}")
    return 0


def command_eval(args: argparse.Namespace) -> int:
    try:
        result = evaluate_at(catalog_model(args.model), args.tensor, args.point, args.frame)
    except VerificationError as e:
        logger.error(f"Evaluation failed: {e}")
        return 1
    print(json.dumps(to_jsonable(result), indent=2, default=str))
    return 0


def command_report(args: argparse.Namespace) -> int:
    report = load_report(args.input)
    print_summary(report)
    if args.format == "csv":
        out = args.out or os.path.splitext(args.input)[0] + ".csv"
        write_csv_exports(report, out)
    elif args.out:
        write_json(report, args.out)
    return 0 if report["summary"].get("fail", 0) == 0 else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging()

    try:
        if args.command == "catalog":
            return command_catalog()
        if args.command == "eval":
            return command_eval(args)
        if args.command == "report":
            return command_report(args)
        file_values = load_config_file(args.config) if args.config else None
        config = build_config(file_values, flag_values(args))
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2

    orchestrator = VerificationSuiteOrchestrator(config)
    report = orchestrator.run_suite()
    paths = orchestrator.save_report(report)
    print_summary(to_jsonable(report))
    for path in paths:
        print(f"Report saved to: {path}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
