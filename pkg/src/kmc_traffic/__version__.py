"""Version information for kmc_traffic package."""

__version__ = "0.1.0"
__author__ = "Ganzzi"
__email__ = "boinguyen9701@gmail.com"
__license__ = "MIT"
