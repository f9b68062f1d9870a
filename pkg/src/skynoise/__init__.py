"""Topological two-photon Skyrmion states under spatial polarization noise.

Builds Laguerre-Gaussian two-mode states, applies position-dependent
Kraus channels to the local polarization density matrix, and measures
the winding (Skyrmion) number of the normalized Stokes map.
"""

__version__ = "0.1.0"

from .channels import (
    KrausChannel,
    apply_channel,
    channel_amplitude_damping,
    channel_bit_flip,
    channel_depolarizing,
    channel_diattenuator,
    channel_phase_damping,
    channel_phase_flip,
    channel_retarder,
    convex_combine,
    homotopy_channel,
    verify_cptp,
)
from .grid import (
    ComplexField,
    ComplexMatrixField,
    Grid,
    ScalarField,
    dump_fields,
    integrate,
    load_fields,
    make_grid,
    map_field,
    skgf_bytes,
)
from .modes import LocalDensityField, StateSpec, build_state, lg_mode
from .polarimetry import (
    apply_mueller,
    jones_diattenuator,
    jones_retarder,
    mueller_depolarizer,
    mueller_diattenuator,
    mueller_from_jones,
    mueller_retarder,
)
from .profiles import CutoffRamp, NoiseProfile, constant, gauss_cos, one_minus_gauss_cos
from .topology import (
    PlaneWarp,
    SkyrmionResult,
    StokesField,
    UnitStokesField,
    boundary_phi_dependence,
    normalize_stokes,
    skyrmion_density,
    skyrmion_number,
    stokes_from_density,
    stokes_generic_form,
    unit_stokes_of,
    warp_invariance_check,
)
