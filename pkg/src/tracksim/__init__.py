"""tracksim: GPS-free position tracking simulation toolkit.

Modules:
    geometry - triangulation, motion lines, zone prediction, beamwidths
    kalman   - road-constrained Kalman tracking filter
    phy      - block coding, OFDM baseband, fading channels, BER runs
    sim      - mobility models and the tracking/efficiency/ranging experiments
    cli      - batch experiment runner with CSV output
"""

__version__ = "0.1.0"
