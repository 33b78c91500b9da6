"""Exact certification of phase, norm and weak phase retrieval for finite frames."""

from .combinatorics import Outcome, Verdict, complement_property, is_full_spark, mrc_check, spark
from .corpus import corpus_names, load_corpus, load_frame
from .duals import (DualFamily, dual_family, failure_variety, nearest_pr_dual, openness_witness,
                    sample_pr_duals)
from .frames import FrameError, FrameSpec, canonical_dual, frame_from_json, validate_frame, verify_dual
from .lift import certify_pr_via_lambda, lambda_matrix, rank2_search
from .recovery import measure, recover_real
from .retrieval import (certify_norm_retrieval_real, certify_phase_retrieval, decide_weak_phase_real,
                        lift_counterexample_operator, project_frame)

__version__ = "0.1.0"

__all__ = [
    "DualFamily", "FrameError", "FrameSpec", "Outcome", "Verdict", "__version__", "canonical_dual",
    "certify_norm_retrieval_real", "certify_phase_retrieval", "certify_pr_via_lambda", "complement_property",
    "corpus_names", "decide_weak_phase_real", "dual_family", "failure_variety", "frame_from_json",
    "is_full_spark", "lambda_matrix", "lift_counterexample_operator", "load_corpus", "load_frame", "measure",
    "mrc_check", "nearest_pr_dual", "openness_witness", "project_frame", "rank2_search", "recover_real",
    "sample_pr_duals", "spark", "validate_frame", "verify_dual",
]
