"""Market-calibrated non-self-financing hedging of European calls on a binomial lattice."""
from .bootstrap import BootstrapConfig, JumpPool, PriceRecord, extract_jumps, generate_ensemble, generate_path
from .contour import Contour, EmptyContourError, SurfaceSpec, extract_contour, surface_value
from .criteria import CriterionKind, RiskReport, evaluate_criterion, optimize_over_contour
from .hedging import PricePath, ResidualLedger, accumulate_residuals, hedge_weights, simulate_hedge, step_residual
from .pricing import DomainError, ModelParams, OptionTerms, no_arbitrage_interval, option_value, risk_neutral_p

__version__ = "0.1.0"
