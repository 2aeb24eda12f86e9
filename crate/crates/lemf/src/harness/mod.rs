//! Harness (under construction).
