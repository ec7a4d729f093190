def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    reports = []
    for outcome in ("passed", "failed", "error"):
        reports.extend(terminalreporter.stats.get(outcome, []))
    acceptance = [
        r
        for r in reports
        if getattr(r, "when", "call") == "call" and "test_acceptance" in r.nodeid
    ]
    if not acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for report in sorted(acceptance, key=lambda r: r.nodeid):
        name = report.nodeid.split("::")[-1]
        terminalreporter.write_line(f"{name}: {report.outcome.upper()}")
