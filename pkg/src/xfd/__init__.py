"""Strong functional dependencies over XML trees with marked nulls."""
from .errors import *  # noqa: F401,F403
from .model import Null, NodeIdentity, NodeKind, StepKind, Str, XmlTree, ancestors, node_val, validate
from .paths import (ROOT, ExtendedTree, Path, PathStep, aancestor, anc, att, check_consistent,
                    intersect, is_complete, is_prefix, is_strict_prefix, minimal_extension,
                    n_nodes, nodes_under, path_instances)
from .semantics import Report, Satisfied, Violated, Xfd, satisfies, satisfies_all
from .closure import ClosureSet, closure, implies
from .axioms import DerivationStep, axiom_closure, derivation, derive_all, derives, path_universe
from .chase import chase, run_chase
from .counterexample import build_T0, build_T1, counterexample
from .formats import parse_constraints, parse_xml, render_constraints, serialize_tree

__version__ = "0.1.0"
