"""Shared pytest plumbing: the acceptance summary block.

test_acceptance.py records one line per numbered criterion; printing them from
a terminal-summary hook keeps the pass/fail lines visible in captured runs.
"""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance summary")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
