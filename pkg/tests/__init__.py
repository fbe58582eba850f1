"""Test suite for the curvedalg library."""
