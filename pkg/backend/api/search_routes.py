"""
API routes for parameter optimization and randomized baselines
"""

from flask import Blueprint, jsonify
from pydantic import ValidationError as PydanticValidationError

from backend.api.uploads import BadRequest, form_value, json_errors, uploaded_dataset
from backend.baselines.randomized import BaselineConfig, run_baseline
from backend.core.models import ProbabilityModel
from backend.core.rng import resolve_seed
from backend.reports import to_jsonable
from backend.search.staged import staged_optimization
from backend.winprob.spread_index import build_index
from config.settings import DEFAULT_BASELINE_PARAMS, DEFAULT_STRATEGY_PARAMS, WORKERS

search_bp = Blueprint('search', __name__)


@search_bp.route('/api/optimize', methods=['POST'])
@json_errors
def optimize():
    """Plain EV, epsilon-only and full (epsilon, tau) optimum for one dataset"""
    dataset = uploaded_dataset()
    try:
        model = ProbabilityModel(form_value('model', str, DEFAULT_STRATEGY_PARAMS['model']))
    except ValueError as e:
        raise BadRequest(str(e))
    panel = staged_optimization(dataset, None, model, build_index(dataset))
    return jsonify({'success': True, 'panel': to_jsonable(panel)})


@search_bp.route('/api/baseline', methods=['POST'])
@json_errors
def baseline():
    dataset = uploaded_dataset()
    seed = resolve_seed(form_value('seed', int))
    try:
        config = BaselineConfig.for_kind(
            form_value('kind', str, 'spread_equal'),
            theta=form_value('theta', float),
            replications=form_value('replications', int, DEFAULT_BASELINE_PARAMS['replications']),
            rng_seed=seed,
        )
    except (ValueError, PydanticValidationError) as e:
        raise BadRequest(str(e))
    summary = run_baseline(dataset, config, workers=WORKERS,
                           level=form_value('level', float, DEFAULT_BASELINE_PARAMS['level']))
    return jsonify({'success': True, 'summary': to_jsonable(summary)})
