"""Exact fixed-point experiments for multipoint Kannan-type maps on finite metric spaces."""

from .classifiers import (INFINITE, ClassificationReport, Verdict, classify_b_kannan,
                          classify_g_kannan, coefficient_calculus, evaluate_ratio,
                          kannan_min_coefficient, npk_min_coefficient, tpd_min_coefficient)
from .exceptions import ContractError, DomainError, StructureError
from .iteration import (CauchyCertificate, EnvelopeCheck, GapAnalysis, IterationTrace,
                        Termination, cauchy_certificate, envelope_check, gap_condition, picard)
from .mappings import (OrbitAnalysis, SelfMap, constant_map, fixed_points, identity_map,
                       is_asymptotically_regular, orbit, periodic_points)
from .metric import (FiniteMetricSpace, ValidationReport, is_ultrametric, make_paper_example,
                     metric_closure, total_pairwise_sum, validate_metric)
from .search import (CampaignSummary, GeneratorConfig, TheoremReport, campaign, generate,
                     mine_separation, verify_theorems)

__version__ = "0.1.0"
