"""Two-phase multilingual transcription: Romanized CTC decoding plus prompt-driven conversion."""

__version__ = "0.1.0"
