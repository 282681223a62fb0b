def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance lines (PASS/FAIL per criterion) at the end of the run."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        import sys
        mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
        RESULTS = getattr(mod, "RESULTS", {})
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
