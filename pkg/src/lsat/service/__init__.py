"""HTTP access layer; see lsat.service.app."""
