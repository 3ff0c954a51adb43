from asrmoea.harness import (RunSettings, RunManifest, EvaluationReport,
                             TargetTextSpec, load_config, parse_binding,
                             load_corpus, generate_target, waveform_cc,
                             list_inputs, attack_command, load_pairs,
                             evaluate_command, transfer_command,
                             MANIFEST_FILE, OK, FAILED)
from asrmoea.attack import TARGETED, UNTARGETED
from asrmoea.audio import AudioClip, save_wav, load_wav
from asrmoea.exceptions import ConfigError, NoEligibleTargetError
from asrmoea.oracles import TranscriberBinding, transcribe, TOY, HTTP
from asrmoea.tests.signals import tone, targeted_utterance, SILENCE, RATE
from collections import Counter
import json
import math
import numpy as np
import os
import pandas as pd
import pytest

IDENTITY = {'population_size': 10, 'survivor_count': 5,
            'init_noise_amplitude': 0.0, 'mutation': {'prob_m': 0.0},
            'oracle': {'kind': 'toy'}}

CORPUS = """Hello there
go one
A b c d e f

single
one two three
"""


def write_json(path, doc):
    with open(str(path), 'w') as f:
        json.dump(doc, f)
    return str(path)


def write_corpus(tmp_path, text=CORPUS):
    path = tmp_path / 'corpus.txt'
    path.write_text(text)
    return str(path)


def speech_clip():
    """'got money', robust to 16-bit quantization."""
    return AudioClip(np.concatenate([tone(0.5, 3), SILENCE, tone(0.2, 2),
                                     SILENCE]), RATE)


def make_inputs(folder):
    folder.mkdir(exist_ok=True)
    save_wav(speech_clip(), str(folder / 'a.wav'))
    save_wav(targeted_utterance(), str(folder / 'b.wav'))
    save_wav(AudioClip(np.zeros(8000), RATE), str(folder / 'c.wav'))
    return str(folder)


class TestLoadConfig(object):

    def test_valid(self, tmp_path):
        settings = load_config(write_json(tmp_path / 'c.json', IDENTITY))
        assert isinstance(settings, RunSettings)
        assert settings.binding == TranscriberBinding(TOY)
        assert settings.mode == UNTARGETED
        assert settings.seed == 0
        assert not settings.draws_targets
        cfg = settings.attack_config(seed=3)
        assert cfg.population_size == 10
        assert cfg.seed == 3

    @pytest.mark.parametrize('doc', [
        [1, 2],
        {'population_size': 10},
        {'oracle': {'kind': 'grpc'}},
        {'oracle': {'kind': 'toy'}, 'population_size': 0},
        {'oracle': {'kind': 'toy'}, 'generations': 5},
        {'oracle': {'kind': 'toy'}, 'mode': TARGETED},
    ])
    def test_invalid(self, tmp_path, doc):
        with pytest.raises(ConfigError):
            load_config(write_json(tmp_path / 'c.json', doc))

    def test_not_json(self, tmp_path):
        path = tmp_path / 'c.json'
        path.write_text('{"oracle": ')
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_config(str(tmp_path / 'none.json'))

    def test_corpus_relative_to_config(self, tmp_path):
        folder = tmp_path / 'conf'
        folder.mkdir()
        doc = dict(IDENTITY, mode=TARGETED, target_corpus='corpus.txt')
        settings = load_config(write_json(folder / 'c.json', doc))
        assert settings.draws_targets
        assert settings.target_corpus == str(folder / 'corpus.txt')

    def test_explicit_target(self, tmp_path):
        doc = dict(IDENTITY, mode=TARGETED, target_text='go one')
        settings = load_config(write_json(tmp_path / 'c.json', doc))
        assert not settings.draws_targets
        assert settings.attack_config().target_text.text == 'go one'

    def test_ignored_corpus_warns(self, tmp_path):
        doc = dict(IDENTITY, target_corpus='corpus.txt')
        with pytest.warns(UserWarning):
            load_config(write_json(tmp_path / 'c.json', doc))


class TestParseBinding(object):

    def test_toy(self):
        assert parse_binding('toy') == TranscriberBinding(TOY)

    def test_inline(self):
        binding = parse_binding('{"kind": "http", "url": "http://x/asr"}')
        assert binding.kind == HTTP
        assert binding.url == 'http://x/asr'

    def test_files(self, tmp_path):
        path = write_json(tmp_path / 'b.json',
                          {'kind': 'toy', 'bin_edges': [0.01, 0.1, 0.2]})
        assert parse_binding(path).bin_edges == (0.01, 0.1, 0.2)
        path = write_json(tmp_path / 'c.json', IDENTITY)
        assert parse_binding(path) == TranscriberBinding(TOY)

    def test_invalid(self):
        with pytest.raises(ConfigError):
            parse_binding('{"kind": ')
        with pytest.raises(ConfigError):
            parse_binding('{"url": "http://x"}')


class TestGenerateTarget(object):

    def test_corpus(self, tmp_path):
        phrases = load_corpus(write_corpus(tmp_path))
        assert [p.text for p in phrases] == [
            'hello there', 'go one', 'a b c d e f', 'single',
            'one two three']

    def test_admissible_lengths(self):
        assert list(TargetTextSpec('x', 5).admissible_lengths) == \
            [2, 3, 4, 5, 6]
        assert list(TargetTextSpec('x', 1).admissible_lengths) == [2]

    def test_lengths_in_range(self, tmp_path):
        spec = TargetTextSpec(write_corpus(tmp_path), 5)
        rng = np.random.default_rng(0)
        lengths = {len(generate_target(spec, rng)) for _ in range(200)}
        assert lengths == {2, 3, 6}

    def test_short_reference(self, tmp_path):
        spec = TargetTextSpec(write_corpus(tmp_path), 1)
        rng = np.random.default_rng(1)
        targets = {generate_target(spec, rng).text for _ in range(100)}
        assert targets == {'hello there', 'go one'}

    def test_uniform(self, tmp_path):
        spec = TargetTextSpec(write_corpus(tmp_path), 5)
        rng = np.random.default_rng(2)
        counts = Counter(generate_target(spec, rng).text
                         for _ in range(6000))
        # a length first, then a phrase of that length
        assert abs(counts['a b c d e f'] / 6000 - 1 / 3) < 0.03
        assert abs(counts['one two three'] / 6000 - 1 / 3) < 0.03
        assert abs(counts['go one'] / 6000 - 1 / 6) < 0.03
        assert abs(counts['hello there'] / 6000 - 1 / 6) < 0.03

    def test_deterministic(self, tmp_path):
        spec = TargetTextSpec(write_corpus(tmp_path), 5)
        a = [generate_target(spec, np.random.default_rng(7))
             for _ in range(3)]
        b = [generate_target(spec, np.random.default_rng(7))
             for _ in range(3)]
        assert a == b

    def test_no_eligible_phrase(self, tmp_path):
        spec = TargetTextSpec(write_corpus(tmp_path, 'one\ntwo\n'), 4)
        with pytest.raises(NoEligibleTargetError):
            generate_target(spec, np.random.default_rng(0))
        spec = TargetTextSpec(write_corpus(tmp_path), 0)
        with pytest.raises(NoEligibleTargetError):
            generate_target(spec, np.random.default_rng(0))


class TestWaveformCc(object):

    def test_cc(self):
        a = AudioClip(np.linspace(-0.5, 0.5, 100), RATE)
        assert waveform_cc(a, a) == pytest.approx(1.0)

    def test_constant_clips(self):
        zeros = AudioClip(np.zeros(10), RATE)
        halves = AudioClip(np.full(10, 0.5), RATE)
        assert waveform_cc(zeros, zeros) == 1.0
        assert math.isnan(waveform_cc(zeros, halves))


class TestAttackCommand(object):

    def test_inputs(self, tmp_path):
        folder = make_inputs(tmp_path / 'in')
        (tmp_path / 'in' / 'notes.txt').write_text('x')
        assert [os.path.basename(p) for p in list_inputs(folder)] == \
            ['a.wav', 'b.wav', 'c.wav']
        assert list_inputs(os.path.join(folder, 'b.wav')) == \
            [os.path.join(folder, 'b.wav')]
        with pytest.raises(FileNotFoundError):
            list_inputs(str(tmp_path / 'nothing'))

    def test_empty_directory(self, tmp_path):
        (tmp_path / 'in').mkdir()
        config = write_json(tmp_path / 'c.json', IDENTITY)
        out = str(tmp_path / 'out')
        with pytest.warns(UserWarning):
            manifest = attack_command(config, str(tmp_path / 'in'), out)
        assert len(manifest) == 0
        assert os.path.exists(os.path.join(out, MANIFEST_FILE))
        summary = manifest.summary()
        assert summary['rows'] == 0
        assert summary['mean_edit_distance'] is None

    def test_identity_batch(self, tmp_path):
        folder = make_inputs(tmp_path / 'in')
        config = write_json(tmp_path / 'c.json', IDENTITY)
        out = str(tmp_path / 'out')
        manifest = attack_command(config, folder, out)
        df = manifest.entries
        assert len(df) == 3
        assert (df['status'] == OK).all()
        assert df['original_transcript'].tolist() == \
            ['got money', 'go one', '']
        assert df['adversarial_transcript'].tolist() == \
            df['original_transcript'].tolist()
        assert df['distance_to_original'].tolist() == [0, 0, 0]
        assert df['generations'].tolist() == [2, 2, 2]
        assert df['cc'].tolist() == pytest.approx([1.0, 1.0, 1.0])
        assert df['seed'].nunique() == 3
        for row in df.itertuples():
            assert os.path.exists(row.output)
            assert os.path.exists(row.history)
            assert load_wav(row.output).sample_rate == RATE
        summary = manifest.summary()
        assert summary['rows'] == 3
        assert summary['failed'] == 0
        assert summary['mean_edit_distance'] == 0.0
        assert summary['mean_wer'] == 0.0
        assert summary['mean_cc'] == pytest.approx(1.0)
        assert summary['mean_distance_to_target'] is None

    def test_failures_are_recorded(self, tmp_path):
        folder = make_inputs(tmp_path / 'in')
        save_wav(AudioClip(np.zeros(800), 8000), os.path.join(folder,
                                                              'd.wav'))
        config = write_json(tmp_path / 'c.json', IDENTITY)
        manifest = attack_command(config, folder, str(tmp_path / 'out'))
        assert manifest.failures == 1
        failed = manifest.entries[manifest.entries['status'] == FAILED]
        assert failed['input'].tolist() == [os.path.join(folder, 'd.wav')]
        assert 'WavFormatError' in failed['error'].iloc[0]
        assert manifest.summary()['rows'] == 4

    def test_targeted_batch_draws_targets(self, tmp_path):
        folder = tmp_path / 'in'
        folder.mkdir()
        save_wav(targeted_utterance(), str(folder / 'b.wav'))
        write_corpus(tmp_path)
        doc = dict(IDENTITY, mode=TARGETED, target_corpus='corpus.txt')
        config = write_json(tmp_path / 'c.json', doc)
        manifest = attack_command(config, str(folder), str(tmp_path / 'out'))
        row = manifest.entries.iloc[0]
        assert row['status'] == OK
        assert row['mode'] == TARGETED
        assert len(row['target_text'].split()) in (2, 3)
        assert row['distance_to_target'] >= 0

    def test_jobs_do_not_change_results(self, tmp_path):
        folder = make_inputs(tmp_path / 'in')
        config = write_json(tmp_path / 'c.json',
                            dict(IDENTITY, init_noise_amplitude=0.001,
                                 max_iters=2))
        serial = attack_command(config, folder, str(tmp_path / 'o1'))
        parallel = attack_command(config, folder, str(tmp_path / 'o2'),
                                  jobs=3)
        columns = ['original_transcript', 'adversarial_transcript',
                   'objective_acoustic', 'objective_text', 'seed']
        pd.testing.assert_frame_equal(serial.entries[columns],
                                      parallel.entries[columns])

    def test_manifest_json(self, tmp_path):
        folder = make_inputs(tmp_path / 'in')
        config = write_json(tmp_path / 'c.json', IDENTITY)
        out = str(tmp_path / 'out')
        manifest = attack_command(config, folder, out)
        path = os.path.join(out, MANIFEST_FILE)
        with open(path) as f:
            doc = json.load(f)
        assert doc['summary'] == manifest.summary()
        assert doc['entries'][2]['wer'] is None
        again = RunManifest.from_json(path)
        assert len(again) == 3
        assert again.summary() == manifest.summary()

    def test_not_a_manifest(self, tmp_path):
        with pytest.raises(ConfigError):
            RunManifest.from_json(write_json(tmp_path / 'm.json', [1]))


class TestEvaluate(object):

    def write_pairs(self, tmp_path, rows):
        path = str(tmp_path / 'pairs.csv')
        pd.DataFrame(rows, columns=['original', 'adversarial',
                                    'reference']).to_csv(path, index=False)
        return path

    def test_identity_pairs(self, tmp_path):
        a = str(tmp_path / 'a.wav')
        save_wav(speech_clip(), a)
        report = evaluate_command(
            self.write_pairs(tmp_path, [(a, a, 'Got money!')]), 'toy')
        row = report.entries.iloc[0]
        assert row['status'] == OK
        assert row['transcript'] == 'got money'
        assert row['edit_distance'] == 0
        assert row['wer'] == 0
        assert row['cc'] == pytest.approx(1.0)

    def test_baseline(self, tmp_path):
        a = str(tmp_path / 'a.wav')
        b = str(tmp_path / 'b.wav')
        save_wav(speech_clip(), a)
        louder = np.concatenate([tone(0.5, 3), SILENCE, tone(0.5, 2),
                                 SILENCE])
        save_wav(AudioClip(louder, RATE), b)
        pairs = self.write_pairs(tmp_path, [(a, b, 'got money')])
        attacked = evaluate_command(pairs, {'kind': 'toy'})
        baseline = evaluate_command(pairs, 'toy', baseline=True)
        assert attacked.entries['transcript'].tolist() == ['got got']
        assert attacked.entries['edit_distance'].tolist() == [1]
        assert attacked.entries['wer'].tolist() == [0.5]
        assert baseline.entries['edit_distance'].tolist() == [0]
        assert 0 < attacked.entries['cc'].iloc[0] < 1

    def test_length_mismatch(self, tmp_path):
        a = str(tmp_path / 'a.wav')
        b = str(tmp_path / 'b.wav')
        save_wav(speech_clip(), a)
        save_wav(AudioClip(tone(0.5, 3), RATE), b)
        report = evaluate_command(
            self.write_pairs(tmp_path, [(a, b, 'got money')]), 'toy')
        row = report.entries.iloc[0]
        assert row['status'] == OK
        assert row['edit_distance'] == 1
        assert math.isnan(row['cc'])
        assert 'length mismatch' in row['error']
        assert report.summary()['mean_cc'] is None

    def test_missing_file(self, tmp_path):
        a = str(tmp_path / 'a.wav')
        save_wav(speech_clip(), a)
        report = evaluate_command(self.write_pairs(
            tmp_path, [(a, a, 'got money'),
                       (a, str(tmp_path / 'gone.wav'), 'got money')]),
            'toy')
        assert report.entries['status'].tolist() == [OK, FAILED]
        assert report.failures == 1
        summary = report.summary()
        assert summary['rows'] == 2
        assert summary['mean_edit_distance'] == 0.0

    def test_bad_csv(self, tmp_path):
        path = tmp_path / 'pairs.csv'
        path.write_text('original,adversarial\na.wav,b.wav\n')
        with pytest.raises(ConfigError):
            load_pairs(str(path))

    def test_manifest_source(self, tmp_path):
        folder = make_inputs(tmp_path / 'in')
        out = str(tmp_path / 'out')
        manifest = attack_command(write_json(tmp_path / 'c.json', IDENTITY),
                                  folder, out)
        pairs = load_pairs(os.path.join(out, MANIFEST_FILE))
        assert len(pairs) == 3
        assert pairs['reference'].tolist() == ['got money', 'go one', '']
        report = evaluate_command(manifest, 'toy')
        assert report.entries['edit_distance'].tolist() == [0, 0, 0]
        assert report.summary()['mean_wer'] == 0.0
        assert report.summary()['mean_cc'] == pytest.approx(1.0)

    def test_report_json(self, tmp_path):
        a = str(tmp_path / 'a.wav')
        save_wav(speech_clip(), a)
        report = evaluate_command(
            self.write_pairs(tmp_path, [(a, a, 'got money')]), 'toy')
        path = str(tmp_path / 'report.json')
        report.to_json(path)
        again = EvaluationReport.from_json(path)
        assert again.entries['transcript'].tolist() == ['got money']
        assert again.summary() == report.summary()


class TestTransfer(object):

    def test_self_transfer_equals_evaluate(self, tmp_path):
        folder = make_inputs(tmp_path / 'in')
        out = str(tmp_path / 'out')
        attack_command(write_json(tmp_path / 'c.json', IDENTITY), folder,
                       out)
        path = os.path.join(out, MANIFEST_FILE)
        transferred = transfer_command(path, 'toy')
        evaluated = evaluate_command(path, 'toy')
        pd.testing.assert_frame_equal(transferred.entries,
                                      evaluated.entries)

    def test_other_recognizer(self, tmp_path):
        folder = make_inputs(tmp_path / 'in')
        out = str(tmp_path / 'out')
        attack_command(write_json(tmp_path / 'c.json', IDENTITY), folder,
                       out)
        other = {'kind': 'toy', 'bin_edges': [0.02, 0.1, 0.4]}
        report = transfer_command(os.path.join(out, MANIFEST_FILE), other)
        first = report.entries.iloc[0]
        assert first['transcript'] == transcribe(
            load_wav(first['adversarial']), TranscriberBinding(**other)).text
        assert first['transcript'] == 'money money'
        assert first['edit_distance'] == 1
