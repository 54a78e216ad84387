"""Decentralized phishing-URL blacklist: replicated vote ledger plus rank-weighted truth discovery."""

__version__ = "0.1.0"
