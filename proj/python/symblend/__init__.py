import json

from ._symblend import BiSequence, ParseError, metric
from ._symblend import cycle_scenario as _cycle_scenario
from ._symblend import mixing_scenario as _mixing_scenario
from ._symblend import run_command as _run_command

__all__ = ["BiSequence", "ParseError", "metric", "run", "cycle_scenario", "mixing_scenario"]


def run(command, config):
    """Run a subcommand on a config dict and return the report as a dict."""
    return json.loads(_run_command(command, json.dumps(config)))


def cycle_scenario(cs_shift=0.035, cu_shift=0.035):
    return json.loads(_cycle_scenario(cs_shift, cu_shift))


def mixing_scenario():
    return json.loads(_mixing_scenario())
