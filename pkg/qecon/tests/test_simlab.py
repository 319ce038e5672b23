import numpy as np
import pytest

from qecon.exceptions import DesignError
from qecon.formats.simlab import (read_outputs, read_samples, write_outputs,
                                  write_samples)
from qecon.sensitivity.distributions import Uniform
from qecon.sensitivity.efast import (Factor, SensitivityDesign,
                                     analyze_outputs, generate_samples)
from qecon.sensitivity.benchmarks import Additive
from qecon.tests.base_test import BaseTest


class TestSimlab(BaseTest):

    @pytest.fixture
    def design(self):
        return SensitivityDesign([Factor('x1', Uniform(0.0, 1.0)),
                                  Factor('x2', Uniform(0.0, 1.0))],
                                 samples_per_curve=65, resamples=1)

    def test_samples_exact(self, design):
        samples = generate_samples(design)
        write_samples('samples.csv', samples, design.names)
        names, read = read_samples('samples.csv')
        assert names == ['x1', 'x2']
        np.testing.assert_array_equal(read, samples)
        with open('samples.csv') as samples_file:
            assert samples_file.readline() == 'x1,x2\n'

    def test_external_evaluation(self, design):
        samples = generate_samples(design, seed=4)
        write_samples('samples.csv', samples, design.names)
        _, read = read_samples('samples.csv')
        write_outputs('output.csv', [Additive()(row) for row in read])
        outputs = read_outputs('output.csv')
        assert outputs.shape == (design.n_rows,)
        result = analyze_outputs(outputs, design, seed=4)
        assert result.first('x1') == pytest.approx(0.5, abs=0.05)

    def test_column_mismatch(self, design):
        with pytest.raises(DesignError):
            write_samples('samples.csv', np.zeros((3, 2)), ['x1'])
        with open('bad.csv', 'w') as bad:
            bad.write('x1,x2,x3\n0.1,0.2\n')
        with pytest.raises(DesignError):
            read_samples('bad.csv')

    def test_output_header(self):
        with open('output.csv', 'w') as bad:
            bad.write('roi\n1.0\n')
        with pytest.raises(DesignError):
            read_outputs('output.csv')
        write_outputs('output.csv', [0.25])
        np.testing.assert_array_equal(read_outputs('output.csv'), [0.25])
