"""
Shared request helpers for the dataset endpoints
"""

import logging
import os
import uuid
from functools import wraps

from flask import jsonify, request
from werkzeug.utils import secure_filename

from backend.errors import LinecheckError
from backend.ingest.loader import load_dataset
from config.settings import ALLOWED_DATASET_EXTENSIONS, UPLOADS_DIR

logger = logging.getLogger(__name__)


class BadRequest(LinecheckError):
    pass


def allowed_file(filename):
    return '.' in filename and os.path.splitext(filename)[1].lower() in ALLOWED_DATASET_EXTENSIONS


def uploaded_dataset():
    """Parse the multipart 'dataset' file; the upload is removed afterwards"""
    if 'dataset' not in request.files:
        raise BadRequest('No dataset file provided')
    file = request.files['dataset']
    if file.filename == '':
        raise BadRequest('No file selected')
    if not allowed_file(file.filename):
        raise BadRequest(f'Invalid file format. Allowed: {", ".join(sorted(ALLOWED_DATASET_EXTENSIONS))}')

    os.makedirs(UPLOADS_DIR, exist_ok=True)
    filename = f"{uuid.uuid4().hex}_{secure_filename(file.filename)}"
    path = os.path.join(UPLOADS_DIR, filename)
    file.save(path)
    try:
        dataset = load_dataset(path)
    finally:
        os.remove(path)
    league = request.form.get('league')
    return dataset.for_league(league) if league else dataset


def form_value(name, cast, default=None):
    raw = request.form.get(name)
    if raw is None or raw == '':
        return default
    try:
        return cast(raw)
    except ValueError:
        raise BadRequest(f"invalid value for {name}: {raw!r}")


def json_errors(view):
    """LinecheckError -> 400, anything else -> 500"""
    @wraps(view)
    def wrapper(*args, **kwargs):
        try:
            return view(*args, **kwargs)
        except LinecheckError as e:
            return jsonify({'error': str(e)}), 400
        except Exception as e:
            logger.exception("❌ %s failed", request.path)
            return jsonify({'error': str(e)}), 500
    return wrapper
