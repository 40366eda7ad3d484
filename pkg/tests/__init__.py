# Tests for src (hilbloc)
