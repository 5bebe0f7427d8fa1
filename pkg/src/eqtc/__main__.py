from eqtc.cli import entry

entry()
