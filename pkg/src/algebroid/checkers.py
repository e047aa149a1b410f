"""Axiom-profile checkers and derived-identity verifiers.

Each profile is a list of labelled operator identities. An identity is
decided by building both sides as canonical multidifferential operators
and subtracting; a failing identity carries a concrete witness input
whose residual is nonzero on re-evaluation.

Profiles:
  lie            skew, P1 (jacobiator = 0), P2 (Leibniz anomaly = 0)
  kv             3i (KV anomaly = 0), 3ii ((fs)s' = f(ss')), 3iii (Leibniz)
  cc             skew, deltaD, r1 (J = D(T)), r2 (pairing invariance)
  courant        skew, deltaD, Ax1 (3J = D(T)), Ax2 (anchor morphism),
                 Ax3 (Leibniz with -<s,s'>D(f)), Ax4 (rho(D f) = 0),
                 Ax5 (pairing invariance)
  nonasym-courant  deltaD, R1 (KV = D of the pairing coboundary),
                 R2 ((fs)s' = f(ss')), R3 (pairing invariance)

The J-versus-D(T) constant is an explicit parameter (jacobi_factor):
cc defaults to 1, courant to 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .funmodel import (
    AlgebroidStructure,
    DiffOp,
    MultiDiffOp,
    Witness,
    find_witness,
    section_inputs,
)
from . import structures as st

PROFILES = ("lie", "kv", "cc", "courant", "nonasym-courant")

DEFAULT_JACOBI_FACTOR = {"cc": 1, "courant": 3}


@dataclass(frozen=True)
class AxiomEntry:
    label: str
    passed: bool
    witness: Optional[Witness] = None
    note: str = ""


@dataclass
class AxiomReport:
    profile: str
    entries: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def entry(self, label: str) -> AxiomEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    def failing_labels(self):
        return [e.label for e in self.entries if not e.passed]

    def __str__(self) -> str:
        lines = [f"profile {self.profile}: {'PASS' if self.passed else 'FAIL'}"]
        for e in self.entries:
            line = f"  {e.label}: {'pass' if e.passed else 'FAIL'}"
            if e.witness is not None:
                line += f"  [{e.witness}]"
            if e.note:
                line += f"  ({e.note})"
            lines.append(line)
        return "\n".join(lines)


def _identity_entry(label: str, diff: MultiDiffOp, note: str = "") -> AxiomEntry:
    """Entry for the identity diff == 0."""
    if diff.is_zero():
        return AxiomEntry(label, True, None, note)
    return AxiomEntry(label, False, find_witness(diff, diff.order() + 1), note)


def _require(S: AlgebroidStructure, profile: str, pairing: bool, d: bool, skew: bool):
    if pairing and S.pairing is None:
        raise ValueError(f"profile {profile!r} needs a pairing")
    if d and S.d_cochain is None:
        raise ValueError(f"profile {profile!r} needs a D cochain")
    if skew and not S.mult.skew:
        raise ValueError(f"profile {profile!r} needs a multiplication declared skew")


def check_profile(
    S: AlgebroidStructure, profile: str, jacobi_factor: Optional[int] = None
) -> AxiomReport:
    """Run every axiom of the named profile as an operator identity."""
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; expected one of {PROFILES}")
    report = AxiomReport(profile)
    ent = report.entries.append

    if profile == "lie":
        _require(S, profile, pairing=False, d=False, skew=True)
        ent(_identity_entry("skew", st.mult_skew_defect_op(S)))
        ent(_identity_entry("P1", st.jacobiator_op(S)))
        ent(_identity_entry("P2", st.leibniz_anomaly_op(S)))
        return report

    if profile == "kv":
        ent(_identity_entry("3i", st.kv_anomaly_op(S)))
        ent(_identity_entry("3ii", st.fs_linearity_defect_op(S)))
        ent(_identity_entry("3iii", st.leibniz_anomaly_op(S)))
        return report

    if profile == "cc":
        _require(S, profile, pairing=True, d=True, skew=True)
        factor = DEFAULT_JACOBI_FACTOR["cc"] if jacobi_factor is None else jacobi_factor
        ent(_identity_entry("skew", st.mult_skew_defect_op(S)))
        ent(_identity_entry("deltaD", st.d_cocycle_defect_op(S)))
        dT = S.d_op().compose(0, st.courant_T_op(S))
        ent(
            _identity_entry(
                "r1",
                st.jacobiator_op(S).scale(factor) - dT,
                note=f"jacobi_factor={factor}",
            )
        )
        ent(_identity_entry("r2", st.invariance_defect_op(S)))
        return report

    if profile == "courant":
        _require(S, profile, pairing=True, d=True, skew=True)
        factor = (
            DEFAULT_JACOBI_FACTOR["courant"] if jacobi_factor is None else jacobi_factor
        )
        ent(_identity_entry("skew", st.mult_skew_defect_op(S)))
        ent(_identity_entry("deltaD", st.d_cocycle_defect_op(S)))
        dT = S.d_op().compose(0, st.courant_T_op(S))
        ent(
            _identity_entry(
                "Ax1",
                st.jacobiator_op(S).scale(factor) - dT,
                note=f"jacobi_factor={factor}",
            )
        )
        ent(_identity_entry("Ax2", st.anchor_morphism_defect_op(S)))
        ent(
            _identity_entry(
                "Ax3", st.leibniz_anomaly_op(S) - st.leibniz_pairing_rhs_op(S)
            )
        )
        ent(_identity_entry("Ax4", st.rho_d_op(S)))
        ent(_identity_entry("Ax5", st.invariance_defect_op(S)))
        return report

    # nonasym-courant
    _require(S, profile, pairing=True, d=True, skew=False)
    ent(_identity_entry("deltaD", st.d_cocycle_defect_op(S)))
    d_delta = S.d_op().compose(0, st.pairing_coboundary_op(S))
    ent(_identity_entry("R1", st.kv_anomaly_op(S) - d_delta))
    ent(_identity_entry("R2", st.fs_linearity_defect_op(S)))
    ent(_identity_entry("R3", st.invariance_defect_op(S)))
    return report


def check_all_profiles(S: AlgebroidStructure) -> dict:
    """Capability matrix: profile -> AxiomReport or precondition message."""
    out = {}
    for profile in PROFILES:
        try:
            out[profile] = check_profile(S, profile)
        except ValueError as exc:
            out[profile] = str(exc)
    return out


# ---------------------------------------------------------------------------
# Derived-identity verifiers.
# ---------------------------------------------------------------------------


def verify_anchor_morphism(S: AlgebroidStructure) -> Optional[Witness]:
    """Decide rho([s,s']) = [rho(s), rho(s')] on all sections.

    Returns None on pass; on failure, a witness (s, s') whose residual is
    the nonzero defect as a differential operator on functions.
    """
    if not S.mult.skew:
        raise ValueError("anchor-morphism check needs a skew multiplication")
    defect = st.anchor_morphism_defect_op(S)  # slots (s, s', f)
    if defect.is_zero():
        return None
    bound = defect.order() + 1
    for s in section_inputs(S.rank, S.base_dim, bound):
        for sp in section_inputs(S.rank, S.base_dim, bound):
            residual = defect.bind(0, s).bind(0, sp)
            if residual.is_zero():
                continue
            # one FUNCTION slot remains; read it off as a DiffOp
            terms = {
                skeys[0][1]: coeff for (_, skeys), coeff in residual.terms.items()
            }
            return Witness((s, sp), DiffOp(S.base_dim, terms))
    raise AssertionError("nonzero defect operator with no section witness")


@dataclass(frozen=True)
class EquivalenceReport:
    """Independent decisions of the two equivalent conditions on a
    CC structure: (A1) anchor morphism, (A2) rho(D(f)) = 0."""

    a1: bool
    a2: bool
    a1_witness: Optional[Witness]
    a2_witness: Optional[Witness]

    @property
    def agree(self) -> bool:
        return self.a1 == self.a2

    @property
    def diagnostic(self) -> str:
        if self.agree:
            return ""
        return (
            "theorem-violation diagnostic: (A1) and (A2) disagree on a CC "
            "structure; this signals an implementation or convention bug"
        )


def _cc_gate(S: AlgebroidStructure, jacobi_factor: Optional[int], caller: str):
    """Require the CC axioms; with no explicit factor, accept either the
    J = D(T) or the 3J = D(T) normalization."""
    factors = (jacobi_factor,) if jacobi_factor is not None else (1, 3)
    last = None
    for factor in factors:
        last = check_profile(S, "cc", jacobi_factor=factor)
        if last.passed:
            return
    raise ValueError(
        f"{caller} needs a structure passing the CC axioms; "
        f"failing: {last.failing_labels()}"
    )


def verify_equivalence_A1_A2(
    S: AlgebroidStructure, jacobi_factor: Optional[int] = None
) -> EquivalenceReport:
    _cc_gate(S, jacobi_factor, "equivalence check")
    morphism = st.anchor_morphism_defect_op(S)
    a1_w = None if morphism.is_zero() else find_witness(morphism, morphism.order() + 1)
    rho_d = st.rho_d_op(S)
    a2_w = None if rho_d.is_zero() else find_witness(rho_d, rho_d.order() + 1)
    return EquivalenceReport(a1_w is None, a2_w is None, a1_w, a2_w)


def verify_prop_64(
    S: AlgebroidStructure, jacobi_factor: Optional[int] = None
) -> AxiomReport:
    """For a CC structure of rank > 3, the three consequences:
    (i) Leibniz with the -<s,s'>D(f) correction, (ii) anchor morphism,
    (iii) rho(D(f)) = 0. All must pass; a failure is escalated in the
    entry note as a theorem-violation diagnostic."""
    if S.rank <= 3:
        raise ValueError(
            f"rank {S.rank} <= 3 rejected: the rank-1 catalog structure "
            "'witt-line' satisfies the CC axioms yet violates all three "
            "consequences, so the derivation needs rank > 3"
        )
    _cc_gate(S, jacobi_factor, "consequence check")
    report = AxiomReport("prop-64-consequences")
    checks = [
        ("i", st.leibniz_anomaly_op(S) - st.leibniz_pairing_rhs_op(S)),
        ("ii", st.anchor_morphism_defect_op(S)),
        ("iii", st.rho_d_op(S)),
    ]
    for label, diff in checks:
        entry = _identity_entry(label, diff)
        if not entry.passed:
            entry = AxiomEntry(
                label,
                False,
                entry.witness,
                "theorem-violation diagnostic: a rank>3 CC structure must "
                "satisfy this identity",
            )
        report.entries.append(entry)
    return report


@dataclass
class NonasymReport:
    """Derived consequences of the non-skew profile with pairing and D."""

    profile: AxiomReport
    leibniz_identity: AxiomEntry
    anchor_identity: AxiomEntry
    d_forced_zero: AxiomEntry
    rho_forced_zero: AxiomEntry

    @property
    def passed(self) -> bool:
        return all(
            e.passed
            for e in (
                self.leibniz_identity,
                self.anchor_identity,
                self.d_forced_zero,
                self.rho_forced_zero,
            )
        )

    @property
    def entries(self):
        return [
            self.leibniz_identity,
            self.anchor_identity,
            self.d_forced_zero,
            self.rho_forced_zero,
        ]


def derive_nonasym_consequences(S: AlgebroidStructure) -> NonasymReport:
    """Check the identities forced on a non-skew pairing structure:

    - leibniz_identity: s(fs') - (rho(s)f)s' - f(ss') = -<s,s'>D(f)
    - anchor_identity (rank > 2): [rho(s),rho(s')] = rho(ss') - rho(s's)
    - d_forced_zero: <s,s'><D(f),s''> + <s,s''><D(f),s'> = 0
    - rho_forced_zero: rho = 0

    The profile verdict is included rather than gated on, so structures
    with an injected non-cocycle D still get a forcing-identity witness.
    """
    if S.pairing is None or S.d_cochain is None:
        raise ValueError("consequence derivation needs a pairing and a D cochain")
    profile = check_profile(S, "nonasym-courant")

    leibniz = _identity_entry(
        "leibniz_identity", st.leibniz_anomaly_op(S) - st.leibniz_pairing_rhs_op(S)
    )
    if S.rank > 2:
        anchor = _identity_entry(
            "anchor_identity", st.anchor_commutator_defect_op(S)
        )
    else:
        anchor = AxiomEntry(
            "anchor_identity", True, None, f"skipped: rank {S.rank} <= 2"
        )
    forcing = _identity_entry("d_forced_zero", st.d_forcing_op(S))
    rho = _identity_entry("rho_forced_zero", S.anchor_op())
    return NonasymReport(profile, leibniz, anchor, forcing, rho)
