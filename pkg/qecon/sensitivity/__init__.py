from qecon.sensitivity.distributions import (DiscreteUniform, Triangular,
                                            TruncatedNormal, Uniform,
                                            distribution_from_dict)
from qecon.sensitivity.efast import (Factor, SensitivityDesign,
                                     SensitivityResult, analyze_outputs,
                                     efast_indices, generate_samples)
from qecon.sensitivity.binding import (Binding, SensitivityStudy,
                                       bind_and_evaluate)
