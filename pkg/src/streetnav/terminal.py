"""Terminal client: the full hotkey surface over a gateway, in text.

Keys arrive as tokens ("ArrowRight", "Alt+J", "type:turn around"),
either interactively or from a script, and every resulting message is
printed with a channel prefix standing in for the two voices. An
optional speech provider hook voices the same text; the bundled
providers keep that path observable without any real TTS engine.
"""
from __future__ import annotations

import sys
from typing import IO, Protocol

from .announcer import StatusMessage
from .gateway import Gateway, GatewayError, HOTKEY_BINDINGS
from .prompts import PromptMode

CHANNEL_PREFIXES = {"Status": "[STATUS] ", "Chat": "[CHAT] "}

KEY_ALIASES = {
    "Left": "ArrowLeft",
    "Right": "ArrowRight",
    "Up": "ArrowUp",
    "Down": "ArrowDown",
    "Esc": "Escape",
}

HELP_HINT = "Unbound key. Type 'help' for the list of bindings."


class SpeechProvider(Protocol):
    """Voices announcements; the terminal never requires one."""

    def speak(self, text: str, channel: str, rate: float) -> None: ...

    def stop(self) -> None: ...


class NullSpeech:
    """Speech disabled; messages appear as text only."""

    def speak(self, text: str, channel: str, rate: float) -> None:
        pass

    def stop(self) -> None:
        pass


class LogSpeech:
    """Stand-in voicing that writes what a TTS engine would say."""

    def __init__(self, out: IO[str]):
        self.out = out

    def speak(self, text: str, channel: str, rate: float) -> None:
        self.out.write(f"[VOICE:{channel}@{rate:g}] {text}\n")

    def stop(self) -> None:
        self.out.write("[VOICE] (stopped)\n")


class TerminalClient:
    """Interactive loop translating key tokens into gateway actions."""

    def __init__(self, gateway: Gateway, fixture: str | None = None,
                 start_pano: str | None = None, heading: float = 0.0,
                 profile: str | None = None, out: IO[str] | None = None,
                 speech: SpeechProvider | None = None, speech_rate: float = 1.0):
        self.gateway = gateway
        self.out = out if out is not None else sys.stdout
        self.speech = speech or NullSpeech()
        self.speech_rate = speech_rate
        self.bindings = {key: request for key, request, _ in HOTKEY_BINDINGS}
        body: dict = {"heading": heading}
        if fixture is not None:
            body["fixture"] = fixture
        if start_pano is not None:
            body["start_pano"] = start_pano
        if profile is not None:
            body["profile"] = profile
        self.session_id = gateway.create_session(body).id

    # -- output ----------------------------------------------------------

    def _emit(self, message: StatusMessage) -> None:
        prefix = CHANNEL_PREFIXES.get(message.voice_channel, "[STATUS] ")
        self.out.write(prefix + message.text + "\n")
        self.speech.speak(message.text, message.voice_channel, self.speech_rate)

    def _run(self, body: dict) -> None:
        try:
            response = self.gateway.handle_action(self.session_id, body)
        except GatewayError as exc:
            self.out.write(f"[ERROR] {exc}\n")
            return
        if body["action"] == "stop_speech":
            self.speech.stop()
        for message in response.messages:
            self._emit(message)

    def print_help(self) -> None:
        self.out.write("Bindings:\n")
        for key, _, behavior in HOTKEY_BINDINGS:
            self.out.write(f"  {key:<12} {behavior}\n")
        self.out.write("  search:TEXT  Teleport to the best match for TEXT\n")
        self.out.write("  type:TEXT    Send TEXT to the chat assistant\n")
        self.out.write("  say:TEXT     Send a spoken transcript to the chat assistant\n")
        self.out.write("  describe:tour        Tour-guide description\n")
        self.out.write("  describe:structured  Structured description\n")
        self.out.write("  close-chat   Close the chat session\n")
        self.out.write("  quit         Leave the session\n")

    # -- token dispatch ---------------------------------------------------

    def handle_token(self, token: str) -> bool:
        """Executes one key token; False means the loop should stop."""
        token = token.strip()
        if not token or token.startswith("#"):
            return True
        if token == "quit":
            return False
        if token == "help":
            self.print_help()
            return True
        if token.startswith("search:"):
            self._run({"action": "teleport", "query": token[len("search:"):]})
            return True
        if token.startswith("type:"):
            self._run({"action": "chat_turn", "input": token[len("type:"):],
                       "mode": "typed"})
            return True
        if token.startswith("say:"):
            self._run({"action": "chat_turn", "input": token[len("say:"):],
                       "mode": "voice"})
            return True
        if token == "describe:tour":
            self._run({"action": "describe", "mode": PromptMode.TOUR_GUIDE.value})
            return True
        if token == "describe:structured":
            self._run({"action": "describe", "structured": True})
            return True
        if token == "close-chat":
            self._run({"action": "chat_close"})
            return True
        key = KEY_ALIASES.get(token, token)
        request = self.bindings.get(key)
        if request is None:
            self.out.write(HELP_HINT + "\n")
            return True
        self._run(dict(request))
        return True

    def run_script(self, tokens) -> None:
        """Replays tokens, echoing each before its output lines."""
        for token in tokens:
            stripped = token.strip()
            if not stripped or stripped.startswith("#"):
                continue
            self.out.write(f"> {stripped}\n")
            if not self.handle_token(stripped):
                break

    def run_interactive(self, stdin: IO[str] | None = None) -> None:
        stdin = stdin if stdin is not None else sys.stdin
        self.out.write("streetnav terminal. Type 'help' for bindings, 'quit' to leave.\n")
        for line in stdin:
            if not self.handle_token(line):
                break
