"""Equilibria and monopoly pricing for linear-quadratic network games."""
from .centrality import bonacich, centrality_gain, weighted_bonacich
from .discriminatory import DiscriminatoryPricingResult, decompose_prices, optimal_prices
from .equilibrium import (ConsumptionEquilibrium, best_response, solve_equilibrium,
                          solve_equilibrium_exact)
from .errors import (IllDefined, Inconsistent, InvalidInstance, NoConvergence,
                     NotPositiveDefinite, PricingError, SingularSystem, TooLarge)
from .model import MarketInstance, load_instance, profit, utility, validate
from .two_price import (QuboProblem, SdpSolution, TwoPriceInstance, TwoPriceResult,
                        approximate, brute_force, m_offset, round_hyperplane, solve_sdp,
                        to_qubo)
from .uniform import UniformPriceResult, breakpoints, optimal_uniform_price
from .value_of_info import ProfitComparison, compare, profits, ratio_bounds

__all__ = [name for name in dir() if not name.startswith("_")]
