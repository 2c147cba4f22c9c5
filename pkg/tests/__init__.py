# Tests for cprsim
