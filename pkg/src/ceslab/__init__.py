"""Norms, duals and interpolation of Cesàro, Copson and Tandori spaces."""
from .duality import conj_exponent, conjugate, conjugate_phi, dual_norm_oracle, dual_space
from .interpolation import (KProfile, check_S_bounded, cl_norm, k_exact_weightedL1, k_numeric, k_profile,
                            real_interp_norm)
from .kernels import ExactFun
from .norms import EvalConfig, NormResult, norm, norm_value, sum_norm
from .spaces import PCFun, Seq, SpaceError, parse_space, render

__version__ = "0.1.0"
