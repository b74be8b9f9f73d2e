"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from basiq.formulas import Atom, Bin, Op, PerpAtom, Sequent

names = st.sampled_from(["A", "B", "C", "Q1", "Xy"])
atoms = st.builds(Atom, names)
literals = st.one_of(atoms, st.builds(PerpAtom, names))

formulas = st.recursive(
    literals,
    lambda sub: st.builds(Bin, st.sampled_from(list(Op)), sub, sub),
    max_leaves=12,
)

sequents = st.builds(
    Sequent,
    st.lists(formulas, max_size=3).map(tuple),
    st.lists(formulas, max_size=3).map(tuple),
)
