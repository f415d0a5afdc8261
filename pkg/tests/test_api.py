import io

import pytest

from app import create_app
from backend import __version__
from backend.ingest.loader import save_dataset
from helpers import assert_matches_schema


@pytest.fixture
def client(tmp_path, monkeypatch):
    monkeypatch.setattr('backend.api.uploads.UPLOADS_DIR', str(tmp_path / 'uploads'))
    app = create_app()
    app.config['TESTING'] = True
    return app.test_client()


@pytest.fixture
def history_bytes(spread_history, tmp_path):
    return save_dataset(spread_history, tmp_path / 'history.csv').read_bytes()


def upload(client, url, payload, filename='nfl.csv', **form):
    data = {'dataset': (io.BytesIO(payload), filename), **form}
    return client.post(url, data=data, content_type='multipart/form-data')


def test_health(client):
    body = client.get('/health').get_json()
    assert body == {'status': 'healthy', 'version': __version__}


def test_validate(client, history_bytes, tmp_path):
    response = upload(client, '/api/validate', history_bytes)
    assert response.status_code == 200
    body = response.get_json()
    assert body['games'] == 6
    assert body['leagues'] == ['NFL']
    assert body['quotes'] == 7
    assert list((tmp_path / 'uploads').iterdir()) == []


def test_backtest(client, history_bytes):
    response = upload(client, '/api/backtest', history_bytes, epsilon='0', ev_threshold='0')
    assert response.status_code == 200
    report = response.get_json()['report']
    assert_matches_schema(report, 'backtest_report')
    assert report['games_bet'] == 5
    assert report['total_return'] == pytest.approx(0.0, abs=1e-12)
    assert 'ledger' not in report


def test_backtest_rejects_out_of_range_epsilon(client, history_bytes):
    response = upload(client, '/api/backtest', history_bytes, epsilon='0.9')
    assert response.status_code == 400
    assert 'error' in response.get_json()


def test_backtest_rejects_non_numeric_threshold(client, history_bytes):
    response = upload(client, '/api/backtest', history_bytes, ev_threshold='abc')
    assert response.status_code == 400


def test_bad_uploads(client, history_bytes):
    assert client.post('/api/validate', data={}, content_type='multipart/form-data').status_code == 400
    assert upload(client, '/api/validate', history_bytes, filename='nfl.xlsx').status_code == 400
    malformed = upload(client, '/api/validate', b'game_id,league\ng1,NFL\n')
    assert malformed.status_code == 400
    assert 'missing columns' in malformed.get_json()['error']


def test_league_filter_without_games(client, history_bytes):
    response = upload(client, '/api/backtest', history_bytes, league='NBA')
    assert response.status_code == 400


def test_optimize(client, history_bytes):
    response = upload(client, '/api/optimize', history_bytes, model='weighted')
    assert response.status_code == 200
    panel = response.get_json()['panel']
    assert_matches_schema(panel, 'optimize_panel')
    assert panel['model'] == 'weighted'
    assert panel['plain_ev']['epsilon'] is None
    assert panel['full']['total_return'] >= panel['epsilon_only']['total_return']
    assert upload(client, '/api/optimize', history_bytes, model='fancy').status_code == 400


def test_baseline(client, history_bytes):
    response = upload(client, '/api/baseline', history_bytes, kind='moneyline_tilted',
                      replications='100', seed='3')
    assert response.status_code == 200
    summary = response.get_json()['summary']
    assert_matches_schema(summary, 'baseline_summary')
    assert summary['kind'] == 'moneyline_tilted'
    assert summary['theta'] == 0.67
    assert summary['seed'] == 3
    assert summary['games'] == 6
    again = upload(client, '/api/baseline', history_bytes, kind='moneyline_tilted',
                   replications='100', seed='3').get_json()['summary']
    assert again == summary
    assert upload(client, '/api/baseline', history_bytes, kind='martingale').status_code == 400
