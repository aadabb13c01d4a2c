from dtc_toolkit.utils.colors import Colors


def test_colors_disabled():
    Colors.disable()
    assert not Colors.is_enabled()
    assert Colors.colorize("text", Colors.RED) == "text"
    assert Colors.failure("dtc: boom") == "dtc: boom"
    assert Colors.interrupted("dtc: interrupted") == "dtc: interrupted"
    assert Colors.completed("dtc: done") == "dtc: done"
    assert Colors.detail("flux = 0.3") == "flux = 0.3"


def test_colors_enabled(mocker):
    mocker.patch.object(Colors, "_ENABLED", True)
    assert Colors.failure("boom") == f"{Colors.BOLD}{Colors.RED}boom{Colors.RESET}"
    assert Colors.interrupted("stop") == f"{Colors.YELLOW}stop{Colors.RESET}"
    assert Colors.completed("done") == f"{Colors.GREEN}done{Colors.RESET}"
    assert Colors.detail("x") == f"{Colors.GREY}x{Colors.RESET}"


def test_no_color_disables_styling(monkeypatch):
    monkeypatch.setenv("NO_COLOR", "1")
    Colors.enable()
    assert not Colors.is_enabled()
