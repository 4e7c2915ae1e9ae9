from .estep import EStepMoments, residualize, second_moments, residual_second_moments, e_step, e_step_from_moments
from .cmstep import cm_psi, cm_phi, cm_lambda, cm_beta, expected_residual_diagonal
from .likelihood import expected_complete_loglik, observed_loglik, study_loglik, information_criteria
from .ecm import ECM, fit
