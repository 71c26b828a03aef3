"""Tests for the rmt_fluct laboratory."""
