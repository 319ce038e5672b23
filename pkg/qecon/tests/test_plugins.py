import types

import pytest

from qecon.exceptions import DesignError
from qecon.tests.base_test import BaseTest


class TestPlugins(BaseTest):
    def test_basic_import(self):
        import qecon.designs
        assert isinstance(qecon.designs, types.ModuleType)

    def test_package_keeps_submodule(self):
        import qecon
        import qecon.designs
        assert isinstance(qecon.designs, types.ModuleType)
        assert qecon.get_study is qecon.designs.get_study
        assert qecon.get_study('constant').design.name == 'constant'

    @pytest.mark.parametrize(
        'design_name',
        ['ishigami', 'additive', 'constant', 'abstract', 'detailed',
         'practical'],
    )
    def test_designs_contents(self, design_name):
        import qecon.designs
        assert design_name in dir(qecon.designs.designs)
        assert design_name in qecon.designs.available()

    def test_register(self):
        import qecon.designs
        qecon.designs.register('tiny', qecon.designs.constant)
        try:
            study = qecon.designs.get_study('tiny')
            assert study.design.name == 'constant'
        finally:
            delattr(qecon.designs.designs, 'tiny')

    def test_unknown_design(self):
        import qecon.designs
        with pytest.raises(DesignError):
            qecon.designs.get_study('nonesuch')
