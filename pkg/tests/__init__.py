"""Test suite for trend-cycle-dfm."""
