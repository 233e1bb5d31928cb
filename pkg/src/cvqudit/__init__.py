"""Qudit structure inside truncated continuous-variable systems.

Builds the generalized Gell-Mann generators of su(n), embeds them
blockwise into an N-dimensional truncated Fock space, maps states and
observables between the two pictures through generalized Bloch tensors,
and evaluates Bell inequalities (qutrit closed form and lifted CHSH) on
two-mode squeezed and block-mixture states.
"""
from .bell import (BellCurve, ChshSettings, bell_curve, bell_value,
                   chsh_cv_expectation, chsh_operator, find_max_violation,
                   fu_bell_max, nopa_qutrit_coeffs, textbook_settings,
                   violation_threshold)
from .bloch_map import (BlochTensor, ClassCoefficients, InducedState,
                        bloch_expectation, block_class_member,
                        class_coefficients, class_expectation, decompose,
                        fidelity_with_pure, induced_qudit_state,
                        lift_observable, reconstruct)
from .cv_states import (BlockMixture, EmptyProjectionError, FockKet,
                        block_mixture_w, geometric_weights,
                        max_entangled_block, nopa, project_block)
from .embedding import (EmbeddedGeneratorSet, block_generators,
                        block_projector, build_embedded,
                        used_subspace_projector, verify_embedded)
from .su_algebra import (GeneratorSet, build_generators, structure_constants,
                         verify_algebra)
from .tensor_core import commutator, expectation, kron, trace_product

__all__ = [
    "BellCurve", "BlochTensor", "BlockMixture", "ChshSettings",
    "ClassCoefficients", "EmbeddedGeneratorSet", "EmptyProjectionError",
    "FockKet", "GeneratorSet", "InducedState",
    "bell_curve", "bell_value", "bloch_expectation", "block_class_member",
    "block_generators", "block_mixture_w", "block_projector",
    "build_embedded", "build_generators", "chsh_cv_expectation",
    "chsh_operator", "class_coefficients", "class_expectation", "commutator",
    "decompose", "expectation", "fidelity_with_pure", "find_max_violation",
    "fu_bell_max", "geometric_weights", "induced_qudit_state", "kron",
    "lift_observable", "max_entangled_block", "nopa", "nopa_qutrit_coeffs",
    "project_block", "reconstruct", "structure_constants",
    "textbook_settings", "trace_product", "used_subspace_projector",
    "verify_algebra", "verify_embedded",
]
