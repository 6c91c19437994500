"""cavraman: rate-model simulator for cavity-enhanced Raman cooling of
the rotational, vibrational and translational motion of diatomic
molecules."""

__version__ = "0.1.0"
