"""Certification pipeline: run every PPT check plus the witness and issue a verdict."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import pptlab, witness
from .errors import ConsistencyError, IllConditioned
from .qmat import as_matrix, eig_hermitian
from .serialize import SCHEMA
from .states import ABLSParams, DCTParams

BOUND_ENTANGLED = "BOUND_ENTANGLED"
NPT = "NPT"
SEPARABLE_UNKNOWN = "SEPARABLE_UNKNOWN"

SPA_CHECK_TOL = 1e-10
SPECTRUM_CHECK_TOL = 1e-6


@dataclass
class CertReport:
    state_family: str
    params: dict
    witness: witness.WitnessReport | None
    pt: list
    spa: list
    power_traces: list
    spectrum_from_traces: list | None
    verdict: str
    notes: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "schema": SCHEMA,
            "state_family": self.state_family,
            "params": self.params,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "pt": [r.to_dict() for r in self.pt],
            "spa_min_eigenvalue": {r.cut: r.min_eigenvalue for r in self.spa},
            "spa": [r.to_dict() for r in self.spa],
            "power_traces": list(self.power_traces),
            "spectrum_from_traces": self.spectrum_from_traces,
            "verdict": self.verdict,
        }
        out.update(self.extra)
        out["notes"] = list(self.notes)
        return out


def params_dict(p) -> dict:
    if isinstance(p, ABLSParams):
        return {"a": p.a, "b": p.b, "c": p.c}
    if isinstance(p, DCTParams):
        return {
            "lambda0_plus": p.lambda0_plus, "lambda0_minus": p.lambda0_minus,
            "lambda01": p.lambda01, "lambda10": p.lambda10, "lambda11": p.lambda11,
        }
    return {}


def abls_verdict(witness_value: float, reports) -> str:
    if any(not r.is_ppt for r in reports):
        return NPT
    return BOUND_ENTANGLED if witness_value < 0 else SEPARABLE_UNKNOWN


def dct_verdict(reports, predicted: set[str] | None) -> str:
    """One NPT cut that matches the s_k prediction is bound entangled; more is NPT."""
    npt = {r.cut for r in reports if not r.is_ppt}
    if not npt:
        return SEPARABLE_UNKNOWN
    if len(npt) == 1 and (predicted is None or npt == predicted):
        return BOUND_ENTANGLED
    return NPT


def certify(rho, family: str, params=None, *, seed: int = 0, n_probes: int = witness.N_PROBES,
            witness_estimate: float | None = None, strict: bool = True,
            npt_cuts: set[str] | None = None) -> CertReport:
    """Full report for ``rho``.

    ``witness_estimate`` replaces tr(W rho) when the witness was measured
    directly. With ``strict`` the internal cross-checks raise
    ConsistencyError; counts-based input passes ``strict=False`` because a
    reconstructed state need not be positive. ``npt_cuts``, when given,
    decides which cuts count as NPT for the verdict (used for counts input,
    where the point estimate alone is not a reliable sign test).
    """
    rho = as_matrix(rho)
    notes = []
    reports = pptlab.pt_reports(rho)
    for r in reports:
        if r.is_ppt and r.min_eigenvalue < 0:
            notes.append(f"cut {r.cut}: min eigenvalue {r.min_eigenvalue:.3g} within tolerance of 0, treated as PPT")

    spa = []
    for cut in pptlab.CUTS:
        diff = float(np.max(np.abs(pptlab.spa_kraus(rho, cut) - pptlab.spa_affine(rho, cut))))
        if diff > SPA_CHECK_TOL:
            raise ConsistencyError(f"SPA operator-sum and affine forms differ by {diff:.3g} on cut {cut}")
        spa.append(pptlab.spa_report(rho, cut))

    traces = pptlab.power_traces(rho, 8)
    try:
        recovered = pptlab.spectrum_from_traces(traces).eigenvalues
        direct = eig_hermitian(rho, vectors=False).eigenvalues
        err = float(np.max(np.abs(recovered - direct)))
        if err > SPECTRUM_CHECK_TOL:
            if strict:
                raise ConsistencyError(f"spectrum from power traces off by {err:.3g}")
            notes.append(f"spectrum from power traces off by {err:.3g}")
        spectrum = [float(x) for x in recovered]
    except IllConditioned as exc:
        if strict:
            raise ConsistencyError(f"spectrum from power traces failed: {exc}") from exc
        notes.append(f"spectrum from power traces unavailable: {exc}")
        spectrum = None

    verdict_reports = reports
    if npt_cuts is not None:
        verdict_reports = [
            pptlab.PTReport(r.cut, r.spectrum, r.cut not in npt_cuts, r.min_eigenvalue) for r in reports
        ]

    w_report = None
    extra = {}
    if family == "abls":
        p = params if params is not None else None
        if p is None:
            raise ValueError("the ABLS verdict needs parameters for the witness")
        res = witness.epsilon_min(p, seed=seed, n_probes=n_probes)
        value = witness_estimate if witness_estimate is not None else witness.witness_value(p, rho, res.epsilon)
        w_report = witness.WitnessReport(
            p, res.epsilon, res.angles, value, witness.noise_threshold(res.epsilon),
            len(witness.pauli_settings(p, res.epsilon)),
        )
        verdict = abls_verdict(value, verdict_reports)
    elif family == "dct":
        predicted = None
        if params is not None:
            predicted = pptlab.dct_npt_cuts(params)
            sk = pptlab.dct_sk_classify(params)
            agree = predicted == {r.cut for r in verdict_reports if not r.is_ppt}
            extra["sk"] = {"s01": sk["01"], "s10": sk["10"], "s11": sk["11"], "consistent": agree}
            if not agree:
                if strict:
                    raise ConsistencyError("s_k classifier disagrees with the PT spectra")
                notes.append("s_k classifier disagrees with the PT spectra")
        verdict = dct_verdict(verdict_reports, predicted)
    else:
        raise ValueError(f"unknown family {family!r}")

    return CertReport(family, params_dict(params), w_report, reports, spa, [float(x) for x in traces.values],
                      spectrum, verdict, notes, extra)
