from flask import Flask, jsonify
from werkzeug.middleware.proxy_fix import ProxyFix
from config import config_by_name

# Import blueprints
from blueprints.api import api_bp


def create_app(config_name='default'):
    app = Flask(__name__)
    app.wsgi_app = ProxyFix(app.wsgi_app, x_for=1, x_proto=1, x_host=1, x_prefix=1)
    app.config.from_object(config_by_name[config_name])
    app.logger.setLevel(app.config['LOG_LEVEL'])

    # Register Blueprints
    app.register_blueprint(api_bp)

    @app.route('/')
    def index():
        return jsonify({
            "service": "compgraph",
            "endpoints": sorted(str(rule) for rule in app.url_map.iter_rules() if str(rule).startswith('/api')),
        })

    return app


if __name__ == '__main__':
    import os
    app = create_app(os.environ.get('COMPGRAPH_ENV', 'development'))

    if os.name == 'nt':
        # Windows: Use Waitress to prevent WinError 10038 sockets crashing
        from waitress import serve
        app.logger.info("Starting Waitress server on http://127.0.0.1:5000")
        serve(app, host='127.0.0.1', port=5000)
    else:
        # Mac/Linux local fallback (production runs Gunicorn via the Procfile)
        app.run(debug=app.config.get('DEBUG', False), port=5000)
