"""
Wiring an external decider into a session
=========================================

Any process that speaks one JSON line per round can act as an agent. This
demo writes a tiny child script, runs it through a session over the wire
protocol, and scores the resulting choice log like any other dataset.
"""

import sys
import tempfile
from pathlib import Path

from rationality import (
    AgentProfile,
    ExternalAgentClient,
    SessionConfig,
    analyze_dataset,
    generate_session,
    run_session,
)

# The child reads {"round", "prices", "budget", "history"} per line and
# answers {"choice": [x_A, x_B]}. This one shuns whichever good is cheap,
# piling 80% of the budget on the expensive one -- a rule that produces
# preference reversals whenever the price order flips between rounds.
CHILD = """\
import json, sys
for line in sys.stdin:
    req = json.loads(line)
    p, m = req["prices"], req["budget"]
    share = 0.2 if p[0] < p[1] else 0.8
    print(json.dumps({"choice": [share * m / p[0], (1 - share) * m / p[1]]}), flush=True)
"""

with tempfile.TemporaryDirectory() as scratch:
    script = Path(scratch) / "luxury_chaser.py"
    script.write_text(CHILD)

    rounds = generate_session(SessionConfig(rounds=25, risk_regime="high", seed=12))
    profile = AgentProfile(kind="external", label="luxury-chaser")

    # one client per session; the context manager shuts the child down
    with ExternalAgentClient([sys.executable, str(script)], timeout=10.0) as client:
        dataset = run_session(profile, rounds, chooser=client.decide)

analysis = analyze_dataset(dataset)
print(f"agent:              {analysis.label}")
print(f"rounds:             {analysis.observations}")
print(f"violating pairs:    {analysis.garp.count}")
print(f"efficiency index:   {analysis.efficiency.value:.4f}")
print(f"budget discipline:  {'clean' if analysis.validation.clean else 'flagged'}")
