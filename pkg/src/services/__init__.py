"""Services (mathematics and session logic) for hilbloc."""
