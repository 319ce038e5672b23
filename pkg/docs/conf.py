# -*- coding: utf-8 -*-
#
# qecon documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing
# dir. Only the values that differ from the sphinx defaults are set here.

import os
import sys

import mock

MOCK_MODULES = ['numpy',
                'numpy.random',
                'networkx',
                'scipy',
                'scipy.integrate',
                'scipy.optimize',
                'scipy.stats',
                'yaml']
for mod_name in MOCK_MODULES:
    sys.modules[mod_name] = mock.Mock()

sys.path.insert(0, os.path.abspath('..'))

import qecon

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.mathjax',
    'sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
    'sphinx.ext.intersphinx',
    'sphinx.ext.autosummary',
    'numpydoc'
]

autosummary_generate = True
autodoc_default_flags = ['members', 'inherited-members']
numpydoc_class_members_toctree = False
numpydoc_show_class_members = False
numpydoc_show_inherited_class_members = False

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'scipy': ('https://docs.scipy.org/doc/scipy', None),
    'networkx': ('https://networkx.org/documentation/stable', None),
}

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'qecon'
copyright = u'2026, the qecon developers'

version = qecon.__version__
release = qecon.__version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

import sphinx_rtd_theme
html_theme = 'sphinx_rtd_theme'
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
html_static_path = ['_static']
html_sidebars = {
'**': ['globaltoc.html', 'sourcelink.html', 'searchbox.html', 'relations.html'],
}
html_split_index = False
htmlhelp_basename = 'qecondoc'

# -- Options for LaTeX and manual page output -----------------------------

latex_documents = [
  ('index', 'qecon.tex', u'qecon Documentation',
   u'the qecon developers', 'manual'),
]

man_pages = [
    ('index', 'qecon', u'qecon Documentation',
     [u'the qecon developers'], 1)
]
