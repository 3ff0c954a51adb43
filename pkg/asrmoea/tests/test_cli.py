from asrmoea.cli import (main, build_parser, format_summary, EXIT_OK,
                         EXIT_PARTIAL, EXIT_ERROR)
from asrmoea.audio import AudioClip, save_wav
from asrmoea.harness import MANIFEST_FILE
from asrmoea.tests.signals import tone, targeted_utterance, SILENCE, RATE
import asrmoea
import io
import json
import numpy as np
import os
import pytest

IDENTITY = {'population_size': 10, 'survivor_count': 5,
            'init_noise_amplitude': 0.0, 'mutation': {'prob_m': 0.0},
            'oracle': {'kind': 'toy'}}


@pytest.fixture
def workspace(tmp_path):
    folder = tmp_path / 'in'
    folder.mkdir()
    save_wav(AudioClip(np.concatenate([tone(0.5, 3), SILENCE]), RATE),
             str(folder / 'a.wav'))
    save_wav(targeted_utterance(), str(folder / 'b.wav'))
    config = tmp_path / 'c.json'
    config.write_text(json.dumps(IDENTITY))
    (tmp_path / 'corpus.txt').write_text('go one\nhello there\nsingle\n')
    return tmp_path


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


class TestCli(object):

    def test_version(self):
        assert asrmoea.__version__ == '0.1.0'

    def test_parser_requires_command(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_attack(self, workspace):
        out_dir = str(workspace / 'out')
        code, text = run('attack', '--config', str(workspace / 'c.json'),
                         '--input', str(workspace / 'in'), '--out', out_dir)
        assert code == EXIT_OK
        assert os.path.exists(os.path.join(out_dir, MANIFEST_FILE))
        assert os.path.exists(os.path.join(out_dir, 'a.adv.wav'))
        assert os.path.exists(os.path.join(out_dir, 'b.history.jsonl'))
        assert 'WER (raw edit count):' in text
        assert 'samples:' in text

    def test_partial_failure(self, workspace):
        save_wav(AudioClip(np.zeros(800), 8000),
                 str(workspace / 'in' / 'c.wav'))
        code, text = run('attack', '--config', str(workspace / 'c.json'),
                         '--input', str(workspace / 'in'),
                         '--out', str(workspace / 'out'))
        assert code == EXIT_PARTIAL
        assert 'failed' in text

    def test_bad_config(self, workspace):
        (workspace / 'bad.json').write_text('{"population_size": 10}')
        code, _ = run('attack', '--config', str(workspace / 'bad.json'),
                      '--input', str(workspace / 'in'),
                      '--out', str(workspace / 'out'))
        assert code == EXIT_ERROR

    def test_missing_input(self, workspace):
        code, _ = run('attack', '--config', str(workspace / 'c.json'),
                      '--input', str(workspace / 'nothing'),
                      '--out', str(workspace / 'out'))
        assert code == EXIT_ERROR

    def test_evaluate_and_transfer(self, workspace):
        out_dir = str(workspace / 'out')
        run('attack', '--config', str(workspace / 'c.json'),
            '--input', str(workspace / 'in'), '--out', out_dir)
        manifest = os.path.join(out_dir, MANIFEST_FILE)
        report = str(workspace / 'report.json')
        code, text = run('evaluate', '--manifest', manifest,
                         '--oracle', 'toy', '--report', report)
        assert code == EXIT_OK
        with open(report) as f:
            doc = json.load(f)
        assert doc['summary']['mean_edit_distance'] == 0.0
        assert 'CC:' in text
        code, _ = run('transfer', '--manifest', manifest,
                      '--oracle', '{"kind": "toy", '
                                  '"bin_edges": [0.02, 0.1, 0.4]}')
        assert code == EXIT_OK
        code, _ = run('evaluate', '--manifest', manifest, '--baseline',
                      '--oracle', str(workspace / 'c.json'))
        assert code == EXIT_OK

    def test_evaluate_bad_oracle(self, workspace):
        code, _ = run('evaluate', '--pairs', str(workspace / 'p.csv'),
                      '--oracle', '{"kind": "grpc"}')
        assert code == EXIT_ERROR

    def test_gen_target(self, workspace):
        corpus = str(workspace / 'corpus.txt')
        code, text = run('gen-target', '--corpus', corpus,
                         '--reference', 'open it', '--seed', '4')
        assert code == EXIT_OK
        assert text.strip() in ('go one', 'hello there')
        again = run('gen-target', '--corpus', corpus,
                    '--reference', 'open it', '--seed', '4')
        assert again == (code, text)

    def test_gen_target_from_wav(self, workspace):
        corpus = str(workspace / 'corpus.txt')
        wav = str(workspace / 'in' / 'b.wav')
        code, text = run('gen-target', '--corpus', corpus,
                         '--reference', wav, '--oracle', 'toy')
        assert code == EXIT_OK
        assert len(text.split()) == 2
        code, _ = run('gen-target', '--corpus', corpus, '--reference', wav)
        assert code == EXIT_ERROR

    def test_gen_target_from_text_file(self, workspace):
        reference = workspace / 'ref.txt'
        reference.write_text('Never mind.\n')
        code, text = run('gen-target',
                         '--corpus', str(workspace / 'corpus.txt'),
                         '--reference', str(reference))
        assert code == EXIT_OK
        assert len(text.split()) == 2

    def test_gen_target_no_phrase(self, workspace):
        corpus = workspace / 'short.txt'
        corpus.write_text('one\ntwo\n')
        code, _ = run('gen-target', '--corpus', str(corpus),
                      '--reference', 'a b c')
        assert code == EXIT_ERROR


class TestFormatSummary(object):

    def test_format(self):
        text = format_summary({'rows': 3, 'failed': 0,
                               'mean_edit_distance': 1.5, 'mean_cc': None})
        lines = text.splitlines()
        assert lines[0].split() == ['samples:', '3']
        assert lines[2].endswith('1.5000')
        assert lines[3].endswith('n/a')
