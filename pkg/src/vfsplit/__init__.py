"""Exact splittings of virtually free groups.

Bass-Serre trees of marked splittings, the Guirardel core of two trees,
surgery on square complexes, blow-ups and the Swarup drivers, with
checkable certificates for every answer.
"""

from .blowup import BlowupReport, blowup_vertex, check_report
from .certificates import CertificateReport
from .core import EquivSquareComplex, build_core
from .decompose import (ChainCertificate, CleaveResult, OneEndedResult, SwarupResult,
                        TwoEndedGraph, cleave_tree, double, one_ended_rel, swarup_amalgam,
                        swarup_hnn)
from .errors import BudgetExceeded, HypothesisViolation, InputError, VFSplitError
from .fibers import check_core, leaf_space
from .graph_of_groups import GraphOfGroups, ends, is_essential, make_graph
from .session import SessionFile, parse_session, serialize
from .surgery import SurgeryTrace, collapse_free_face, shave_tree, shaved_core
from .tree import MarkedSplitting, amalgam, base_splitting, hnn
from .whitehead import find_free_splitting_rel
from .words import FreeBase, GraphBase, SubgroupSpec, free_group, make_base

__all__ = [
    "BlowupReport", "BudgetExceeded", "CertificateReport", "ChainCertificate", "CleaveResult",
    "EquivSquareComplex", "FreeBase", "GraphBase", "GraphOfGroups", "HypothesisViolation",
    "InputError", "MarkedSplitting", "OneEndedResult", "SessionFile", "SubgroupSpec",
    "SurgeryTrace", "SwarupResult", "TwoEndedGraph", "VFSplitError", "amalgam",
    "base_splitting", "blowup_vertex", "build_core", "check_core", "check_report",
    "cleave_tree", "collapse_free_face", "double", "ends", "find_free_splitting_rel",
    "free_group", "hnn", "is_essential", "leaf_space", "make_base", "make_graph",
    "one_ended_rel", "parse_session", "serialize", "shave_tree", "shaved_core",
    "swarup_amalgam", "swarup_hnn",
]
