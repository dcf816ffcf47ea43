"""The {{ namespace }} namespace, shared by several separately installed packages."""

__path__ = __import__("pkgutil").extend_path(__path__, __name__)
