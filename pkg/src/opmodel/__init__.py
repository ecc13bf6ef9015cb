"""Model spaces for finitely atomic operator-valued measures.

A library plus CLI for the finite-dimensional direct-integral model
space of an atomic operator-valued measure: fibers, the constant-family
embedding, intertwining contractions, diagonalization of self-adjoint
perturbations, matrix Herglotz functions, and semi-metric completions.
"""

from .errors import OpModelError
from .linops import (PsdMatrix, RankFactorization, frac_power,
                     heinz_contraction, pinv_power, psd_factorize,
                     range_inclusion, seminorm_quotient, validate_psd)
from .model_space import (ModelSpace, ModelVector, StepFunction,
                          berezanskii_norm, build_model, gram_lambda, inner,
                          lambda_embed, multiplication_operator, s_operator,
                          step_span_dimension, weighted_embed)
from .opmeasure import (AtomicOperatorMeasure, BorelSet, ScalarMeasure,
                        atomic_measure, control_measure, evaluate,
                        kernel_split, total)
from .perturbation import (PerturbationInstance, build_hl, m_function,
                           make_instance, model_unitary, omega_measure,
                           spectral_family, weyl_titchmarsh)
from .herglotz import (MatrixHerglotz, herglotz_eval, herglotz_scan,
                       make_herglotz, recover_cd, stieltjes_invert)
from .completion import (CauchySequence, FiniteSemiMetric,
                         route1_complete_then_quotient, route2_quotient,
                         validate_semimetric)

__version__ = "0.1.0"
