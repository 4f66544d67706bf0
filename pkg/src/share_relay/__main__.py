"""Allow running as: python -m share_relay"""
from share_relay.cli import run

run()
