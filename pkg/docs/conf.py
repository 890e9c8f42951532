# -*- coding: utf-8 -*-
#
# Sphinx configuration for the PyAPCC documentation.

import os
import sys

import sphinx_rtd_theme

sys.path.insert(0, os.path.abspath('..'))

import pyapcc  # noqa

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.coverage',
    'sphinx.ext.mathjax',
    'sphinxarg.ext',
    'sphinx.ext.napoleon'
]

templates_path = ['.templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'PyAPCC'
author = pyapcc.__author__
copyright = u'2024, Laurent Bonnet'
version = str(pyapcc.__version__)
release = str(pyapcc.__version__)
language = 'en'

exclude_patterns = ['.build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'

# Document members in source order so the codec pipeline reads top down.
autodoc_member_order = 'bysource'

html_theme = 'sphinx_rtd_theme'
html_theme_options = {
    'collapse_navigation': True,
    'display_version': True
}
html_theme_path = [
    sphinx_rtd_theme.get_html_theme_path()
]
html_title = u'PyAPCC'
html_short_title = 'Coded computing with hierarchical task partitioning.'
html_show_sourcelink = False
htmlhelp_basename = 'pyapccdoc'

latex_documents = [
    (master_doc, 'pyapcc.tex', u'PyAPCC Documentation', author, 'manual'),
]
man_pages = [
    (master_doc, 'pyapcc', u'PyAPCC Documentation', [author], 1)
]
