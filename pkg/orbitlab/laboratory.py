"""Runs the analyses behind each CLI command and assembles their reports."""
import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from orbitlab.config import Config
from orbitlab.convexity_lab import (
    LineSampler,
    check_convexity,
    convexity_of_values,
    fit_log_affine,
    profile_rows,
    second_differences,
)
from orbitlab.errors import ConfigError, NotConverged
from orbitlab.logger import ReportCollector
from orbitlab.models import (
    RICCI_TO_LOG_VOL,
    Functional,
    LineSegment,
    OrbitStatus,
    RicciVerdict,
    as_list,
)
from orbitlab.orbit_optimizer import (
    boundary_decay_check,
    find_critical_orbit,
    grid_search_maximum,
    multistart_uniqueness,
    seeded_starts,
)
from orbitlab.su2 import (
    SU2Element,
    SU2LieBasis,
    build_haar_quadrature,
    geodesic_coverage,
    geodesic_path,
    geodesic_profile,
    lassalle_average,
)
from orbitlab.toric_calculus import check_toric_psh, classify_ricci, moment_map

logger = logging.getLogger(__name__)

Table = Tuple[List[str], List[List[Any]]]

CRITICAL_VERDICTS = {
    OrbitStatus.MAXIMUM: "critical_orbit",
    OrbitStatus.DEGENERATE: "every_orbit_critical",
}

PROFILE_HEADER = ["t", "vol_J", "vol", "defect", "neg_log_volJ_second_diff", "omega_norm", "density_rel_stddev"]


def log_vol_consistent(ricci: RicciVerdict, log_vol: str) -> bool:
    """Does the logVol verdict match the Ricci verdict under Ric <= 0 iff log Vol convex?"""
    expected = RICCI_TO_LOG_VOL.get(ricci)
    if expected is None:
        return log_vol not in {v.value for v in RICCI_TO_LOG_VOL.values()}
    return log_vol == expected.value


class Laboratory:
    """Main class driving the analyses for one configuration."""

    def __init__(self, config: Config):
        """Initialize with a validated configuration."""
        self.config = config
        self.potential = config.potential()
        self.region = config.region()
        self.workers = int(config.workers)
        self.collector = ReportCollector(config.report_endpoint_url) if config.report_endpoint_url else None

    def publish(self, command: str, report: Dict[str, Any]) -> None:
        """Send a finished report to the collector, if one is configured."""
        if self.collector:
            self.collector.post_report(command, report)

    def _tau(self) -> Optional[float]:
        return self.config.section("thresholds")["tau"]

    def analyze(self) -> Dict[str, Any]:
        """Ricci sign, convexity of the four functionals, and their cross-check."""
        thresholds = self.config.section("thresholds")
        logger.info(f"Analyzing {self.potential.kind} (n={self.potential.n}) on {self.region.to_dict()}")

        ricci = classify_ricci(
            self.potential,
            self.region,
            tau=thresholds["tau"],
            richardson=thresholds["richardson"],
            workers=self.workers,
        )
        sampler = LineSampler.from_dict(self.region, self.config.section("sampler"))
        convexity = {
            functional.value: check_convexity(self.potential, functional, sampler, workers=self.workers)
            for functional in Functional
        }
        a, b, residual = fit_log_affine(self.potential, self.region)
        psh = check_toric_psh(self.potential, self.region, tau=thresholds["tau"])

        log_vol_verdict = convexity[Functional.LOG_VOL.value].verdict.value
        consistency = log_vol_consistent(ricci.verdict, log_vol_verdict)
        if not consistency:
            logger.warning(f"Ricci verdict {ricci.verdict.value} disagrees with logVol verdict {log_vol_verdict}")

        expected = RICCI_TO_LOG_VOL.get(ricci.verdict)
        return {
            "potential": self.potential.to_dict(),
            "ricci": ricci.to_dict(),
            "convexity": {name: report.to_dict() for name, report in convexity.items()},
            "log_affine_fit": {"a": as_list(a), "b": b, "max_residual": residual},
            "psh_check": psh,
            "expected_log_vol_verdict": expected.value if expected else None,
            "consistency": consistency,
        }

    def critical(self) -> Dict[str, Any]:
        """Critical orbit search, multistart uniqueness, grid cross-check and boundary decay.

        Raises NotConverged (carrying the report) when a potential classified
        PositiveDefinite does not yield a unique maximum.
        """
        opt = self.config.section("optimizer")
        boundary = self.config.section("boundary")
        n = self.potential.n
        center = 0.5 * (np.asarray(self.region.lo) + np.asarray(self.region.hi))

        result = find_critical_orbit(
            self.potential,
            center,
            tol=opt["tol"],
            max_iter=opt["max_iter"],
            divergence_radius=opt["divergence_radius"],
        )
        starts = seeded_starts(n, opt["starts"], self.config.seed, opt["start_half_width"])
        uniqueness = multistart_uniqueness(
            self.potential, starts, tol=opt["tol"], max_iter=opt["max_iter"], workers=self.workers,
        )
        decay = boundary_decay_check(
            self.potential,
            boundary["radii"],
            samples_per_sphere=boundary["samples_per_sphere"],
            relative_floor=boundary["relative_floor"],
            seed=self.config.seed,
        )
        ricci = classify_ricci(self.potential, self.region, tau=self._tau(), workers=self.workers)

        report: Dict[str, Any] = {
            "potential": self.potential.to_dict(),
            "verdict": CRITICAL_VERDICTS.get(result.status, "no_interior_maximum"),
            "ricci_verdict": ricci.verdict.value,
            "result": result.to_dict(),
            "moment_map": as_list(moment_map(self.potential, result.x_star)),
            "uniqueness": uniqueness.to_dict(),
            "boundary_decay": decay.to_dict(),
            "grid_check": None,
        }

        if result.converged:
            grid_x, grid_log_vol = grid_search_maximum(
                self.potential, self.region, refinements=opt["grid_refinements"],
            )
            report["grid_check"] = {
                "x": as_list(grid_x),
                "log_volume": grid_log_vol,
                "distance_to_x_star": float(np.linalg.norm(grid_x - result.x_star)),
            }

        if ricci.verdict is RicciVerdict.POSITIVE_DEFINITE and not uniqueness.unique:
            raise NotConverged(
                f"Multistart did not find a unique maximum for a Ric > 0 potential (spread {uniqueness.spread:.3e})",
                result=report,
                spread=uniqueness.spread,
            )
        logger.info(f"Critical orbit verdict for {self.potential.kind}: {report['verdict']}")
        return report

    def profile(self) -> Tuple[Dict[str, Any], Table]:
        """Sample one functional along the configured segment."""
        data = self.config.section("segment")
        if not data:
            raise ConfigError("The profile command needs a \"segment\" section")
        segment = LineSegment.from_dict(data)
        functional = Functional(data.get("functional", Functional.LOG_VOL.value))

        rows = profile_rows(self.potential, functional, segment)
        report = convexity_of_values(functional.value, [value for _, value, _ in rows], segment.step)
        summary = {
            "potential": self.potential.to_dict(),
            "segment": segment.to_dict(),
            "report": report.to_dict(),
        }
        return summary, (["t", functional.value, "second_difference"], [list(row) for row in rows])

    def _su2_setup(self):
        su2 = self.config.section("su2")
        basis = SU2LieBasis()
        t_grid = np.linspace(su2["t_range"][0], su2["t_range"][1], su2["points"])
        quadrature = build_haar_quadrature(*su2["resolution"])
        X = basis.element(su2["direction"])
        k0 = None
        if su2["translate"] is not None:
            q = np.asarray(su2["translate"], dtype=float)
            k0 = SU2Element(*(q / np.linalg.norm(q))).matrix
        return su2, basis, t_grid, quadrature, X, k0

    def su2(self) -> Tuple[Dict[str, Any], Table]:
        """Orbit volumes along k0 exp(i t X) in CP^3, and optionally a coverage sweep."""
        su2, basis, t_grid, quadrature, X, k0 = self._su2_setup()
        profile = geodesic_profile(X, t_grid, su2["lambda"], quadrature, basis, k0)

        summary = profile.summary()
        summary["convexity"] = profile.convexity.to_dict()
        summary["direction"] = as_list(su2["direction"])

        coverage = su2.get("coverage")
        if coverage:
            rng = np.random.default_rng(self.config.seed)
            translates = [None] + [SU2Element.random(rng).matrix for _ in range(coverage.get("translates", 0))]
            directions = [basis.element(d) for d in coverage["directions"]]
            summary["coverage"] = geodesic_coverage(directions, translates, t_grid, su2["lambda"], quadrature)

        rows = [
            [r.t, r.vol_j, r.vol, r.defect, r.second_diff_neg_log_vol_j, r.omega_norm, r.density_rel_stddev]
            for r in profile.rows
        ]
        return summary, (PROFILE_HEADER, rows)

    def lassalle(self) -> Tuple[Dict[str, Any], Table]:
        """Haar averages of a PSH integrand along the configured geodesic."""
        su2, _, t_grid, quadrature, X, k0 = self._su2_setup()
        result = lassalle_average(su2["integrand"], t_grid, geodesic_path(X, t_grid, k0), quadrature)

        diffs = second_differences(result.values, float(t_grid[1] - t_grid[0]))
        last = len(result.values) - 1
        rows = [
            [t, value, float(diffs[i - 1]) if 0 < i < last else None]
            for i, (t, value) in enumerate(zip(result.t, result.values))
        ]
        summary = {
            "integrand": result.integrand,
            "direction": as_list(su2["direction"]),
            "quadrature_resolution": list(quadrature.resolution),
            "report": result.report.to_dict(),
        }
        return summary, (["t", "F", "second_difference"], rows)
