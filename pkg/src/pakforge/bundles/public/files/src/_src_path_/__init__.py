"""{{ project_short_description }}"""

# package version
from {{ import_name }}.version import __version__  # noqa: F401

# silence the pyflakes syntax checker
assert __version__ or True
