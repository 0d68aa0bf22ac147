def pytest_terminal_summary(terminalreporter):
    acceptance = terminalreporter.config.pluginmanager.get_plugin("test_acceptance")
    module = acceptance or _imported_acceptance()
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)


def _imported_acceptance():
    import sys

    return sys.modules.get("test_acceptance")
