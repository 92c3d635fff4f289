"""Exception types raised across the package.

Each error carries a short machine-readable ``code`` so the CLI can serialize
failures without parsing messages.
"""


class CP2BandsError(Exception):
    code = "error"


class GapClosed(CP2BandsError):
    """A requested band subset touches its complement."""

    code = "gap_closed"


class TopologyUnresolved(CP2BandsError):
    """A numerical invariant did not round cleanly even after grid doubling."""

    code = "topology_unresolved"


class VortexOnPlaquette(CP2BandsError):
    code = "vortex_on_plaquette"


class InconsistentInvariants(CP2BandsError):
    code = "inconsistent_invariants"


class NonIntegralCount(CP2BandsError):
    code = "non_integral_count"


class NonIntegralMultiplicity(CP2BandsError):
    code = "non_integral_multiplicity"


class ConfigError(CP2BandsError, ValueError):
    code = "config_error"
