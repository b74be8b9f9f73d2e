"""Sequent-calculus kernel, bounded prover and quantum-semantics checks for
Basic logic extended with the entanglement connective ``@``, its dual
``$`` and the EPR rule."""

from .formulas import (
    Atom,
    BellShape,
    Bin,
    Derivation,
    Formula,
    Op,
    PerpAtom,
    QubitPattern,
    Sequent,
    bell_formula,
    dual,
    entangle,
    match_qubit_pattern,
    mk_qubit,
)
from .kernel import (
    B,
    VARIANTS,
    CheckReport,
    ErrorKind,
    LogicVariant,
    RuleName,
    StepError,
    axiom_instances,
    check_derivation,
    check_step,
)
from .syntax import (
    ParseError,
    parse_derivation,
    parse_formula,
    parse_sequent,
    print_derivation,
    print_formula,
    print_sequent,
)

__version__ = "0.1.0"
