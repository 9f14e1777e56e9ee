"""Machine-checked record of corrected readings.

Each entry names a catalog or conclusion formula whose printed form fails
exact expansion, describes the deviation the default reading applies, and
carries one concrete demonstration pair: the corrected reading passing
and the literal printed reading failing with a mismatch monomial.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .kdf_core import KdfSpec
from .identities import CORRECTED, LITERAL, IdentityId, IdentityInstance, verify
from .reductions import check_conclusion


@dataclass(frozen=True)
class ErrataEntry:
    id: str
    deviation: str
    demo: object  # IdentityInstance, or (params, r) for a conclusion formula

    def reports(self, cap: int = 6):
        """(corrected report, literal report) for the demonstration pair."""
        if isinstance(self.demo, IdentityInstance):
            inst = replace(self.demo, cap=cap)
            return (verify(replace(inst, reading=CORRECTED)),
                    verify(replace(inst, reading=LITERAL)))
        params, r = self.demo
        return (check_conclusion(self.id, params, r, cap, CORRECTED),
                check_conclusion(self.id, params, r, cap, LITERAL))


def _inst(id, spec, i=1, r=2):
    return IdentityInstance(IdentityId(id), spec, param_index=i, r=r, cap=6)


_S_SLOT = KdfSpec.make(1, a=["1/3"], alpha=["7/4"], b=[["1/2"]], beta=[["5/3"]])
_S_DEN = KdfSpec.make(1, a=["1/3"], alpha=["7/4"], b=[[]], beta=[["7/2"]])
_S_PAIR = KdfSpec.make(1, b=[["1/2"]], beta=[["5/3"]])
_S_TWO_A = KdfSpec.make(1, a=["1/2", "5/3"], alpha=["7/4"])
_S_TWO_B = KdfSpec.make(1, b=[["1/2", "5/3"]], beta=[["7/4"]])

LEDGER = (
    ErrataEntry(
        "EQ6",
        "the printed k-sum coefficient carries subscript r on every rising "
        "factorial; the proof's induction needs subscript k",
        _inst("EQ6", _S_SLOT)),
    ErrataEntry(
        "EQ8",
        "the printed x1^k sits on the alternating sum side and the "
        "compensating x1^r is missing from the shifted side; the corrected "
        "form moves the power across",
        _inst("EQ8", _S_DEN)),
    ErrataEntry(
        "EQ9",
        "the printed x1^k on the alternating sum side is spurious; the "
        "right side already carries the whole x1^r factor",
        _inst("EQ9", _S_DEN)),
    ErrataEntry(
        "EQ16",
        "the printed right-side constant 2 is the r >= 1 value of "
        "(1+r)_r/(r)_r and is wrong at r = 0, where the factor is 1",
        _inst("EQ16", _S_PAIR, r=0)),
    ErrataEntry(
        "EQ17",
        "same degenerate constant as EQ16, on the slot-pair variant",
        _inst("EQ17", _S_PAIR, r=0)),
    ErrataEntry(
        "EQ20",
        "the printed k-sum coefficient is missing the binomial factor that "
        "makes the inner sum a terminating unit-argument Gauss sum",
        _inst("EQ20", _S_TWO_A)),
    ErrataEntry(
        "EQ21",
        "same missing binomial factor as EQ20, on the slot-parameter "
        "variant (whose summand also raises the second row parameter, not "
        "the first as printed)",
        _inst("EQ21", _S_TWO_B)),
    ErrataEntry(
        "EQ22",
        "the printed right-side argument list repeats the first argument; "
        "the specialization forces the distinct arguments x1..xn",
        ({"n": 2, "a": ["1/2", "1/3"], "b": ["3/2", "2/3"], "c": "7/3"}, 1)),
    ErrataEntry(
        "EQ23",
        "same collapsed right-side argument list as EQ22",
        ({"n": 2, "a": ["1/2", "1/3"], "b": ["3/2"], "c": "7/3"}, 1)),
    ErrataEntry(
        "EQ24",
        "the printed upper parameter 1+r inside the k-sum is constant; the "
        "specialized identity needs 1+k (and the exact right-side factor "
        "(1+r)_r/(r)_r in place of the constant 2)",
        ({"n": 2, "b": ["1/2", "1/3"]}, 2)),
    ErrataEntry(
        "EQ25",
        "same constant upper parameter and right-side factor as EQ24",
        ({"n": 2, "b": ["1/2"]}, 2)),
)


def run_ledger(cap: int = 6):
    """Evaluate every entry; yields (entry, corrected report, literal report)."""
    for entry in LEDGER:
        ok, bad = entry.reports(cap)
        yield entry, ok, bad
