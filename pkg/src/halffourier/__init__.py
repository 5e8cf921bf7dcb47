"""Half-line Fourier transforms of memory kernels with algebraic
singularities at the origin, their large-frequency asymptotics, and the
resulting decay-rate predictions for equations with memory."""
from halffourier.asymptotics import (
    build_beta_schedule,
    check_lemma1,
    check_p0_formula,
    decompose,
    verify_theorem1,
)
from halffourier.kernels import LimitPair, parse_kernel
from halffourier.memory import decay_forecast, resolvent_growth_proxy, simulate_mode
from halffourier.oscquad import QuadConfig, half_fourier
from halffourier.specfun import asymp_constant, gamma_real

__version__ = "0.1.0"
