"""Numerical models: materials, transfer matrices, pulses and two-photon coincidences."""
