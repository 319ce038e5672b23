# This file is generated in setup.py at build time.
version = '0.1.0'
short_version = '0.1.0'
full_version = '0.1.0'
git_revision = 'Unknown'
release = True
