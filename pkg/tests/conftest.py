def pytest_terminal_summary(terminalreporter):
    """Print one verdict line per end-to-end acceptance check, collected
    while test_acceptance.py ran (output capture would otherwise hide
    them on success)."""
    from helpers import ACCEPTANCE_VERDICTS

    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)
