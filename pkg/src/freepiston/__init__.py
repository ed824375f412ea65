"""Free-piston linear engine: stroke simulation and kickback bore-scale identification."""

from .dynamics import IntegratorConfig, StrokeResult, Termination, Trajectory, simulate_stroke
from .errors import (ContractViolation, DomainError, FreePistonError, NumericalFailure,
                     ValidationError)
from .model import (EngineParams, ForceBreakdown, acceleration, net_force, piston_area,
                    pressure_left, pressure_right, work_integral)
from .optimizer import (CalibrationStatus, SearchConfig, SearchStatus, Strategy,
                        calibrate_xm, optimize_bore_scale, search_direction, sweep,
                        update_step, x_max_energy)

__version__ = "0.1.0"
