"""Bindings to real recognizers: a command-line decoder or an HTTP service."""
from .oraclebase import Oracle, INPUT_PLACEHOLDER
from ..audio import save_wav, wav_bytes
from ..exceptions import OracleError
import json
import logging
import os
import shlex
import subprocess
import tempfile
import urllib.error
import urllib.request

log = logging.getLogger(__name__)


class SubprocessOracle(Oracle):
    """Run a command-line decoder once per clip.

    The clip is written to a temporary WAV file whose path replaces the
    ``{input}`` placeholder of the binding's command template. The
    transcript is read from standard output.

    Raises
    ------
    OracleError
        On a non-zero exit status or when the command exceeds the binding's
        timeout.
    """
    def command_line(self, path):
        template = self.binding.command
        return shlex.split(template.replace(INPUT_PLACEHOLDER,
                                            shlex.quote(path)))

    def raw_transcribe(self, clip):
        with tempfile.TemporaryDirectory(prefix='asrmoea') as workdir:
            path = os.path.join(workdir, 'input.wav')
            save_wav(clip, path)
            args = self.command_line(path)
            log.debug("running %s", args)
            try:
                result = subprocess.run(args, stdout=subprocess.PIPE,
                                        stderr=subprocess.PIPE,
                                        timeout=self.binding.timeout)
            except subprocess.TimeoutExpired:
                raise OracleError("command timed out after {} s: {}".format(
                    self.binding.timeout, args[0]))
            except FileNotFoundError:
                raise OracleError("command not found: {}".format(args[0]))
        if result.returncode != 0:
            stderr = result.stderr.decode('utf-8', 'replace').strip()
            raise OracleError("command exited with status {}: {}".format(
                result.returncode, stderr))
        return result.stdout.decode('utf-8', 'replace').strip()


class HttpOracle(Oracle):
    """POST each clip as WAV bytes to a recognition endpoint.

    The endpoint must answer with a 2xx status and a JSON object whose
    ``text`` member holds the transcript.

    Raises
    ------
    OracleError
        On a non-success status, a timeout, a connection failure or a
        malformed response.
    """
    def raw_transcribe(self, clip):
        request = urllib.request.Request(
            self.binding.url, data=wav_bytes(clip), method='POST',
            headers={'Content-Type': 'audio/wav'})
        try:
            with urllib.request.urlopen(request,
                                        timeout=self.binding.timeout) as r:
                body = r.read()
        except urllib.error.HTTPError as e:
            raise OracleError("HTTP status {} from {}".format(
                e.code, self.binding.url))
        except (urllib.error.URLError, OSError) as e:
            raise OracleError("request to {} failed: {}".format(
                self.binding.url, e))
        try:
            payload = json.loads(body.decode('utf-8'))
            text = payload['text']
        except (ValueError, KeyError, TypeError):
            raise OracleError("malformed response from {}: {!r}".format(
                self.binding.url, body[:200]))
        if not isinstance(text, str):
            raise OracleError("malformed response from {}: 'text' is not a "
                              "string".format(self.binding.url))
        return text
