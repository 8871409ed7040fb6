"""
Django settings for the vlaforge project.

Only the management-command machinery of Django is used: there are no models,
no database and no HTTP surface. Every ``forge`` verb is a management command
living in one of the apps below.
"""

from pathlib import Path

# noinspection PyPackageRequirements
import sentry_sdk
from environ import Env
from sentry_sdk.integrations.django import DjangoIntegration
from sentry_sdk.integrations.logging import LoggingIntegration

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Read from dotenv file
env = Env()
env.read_env(str(BASE_DIR / ".env"))


# SECURITY WARNING: nothing here is served over the network, the key only
# satisfies Django's startup checks.
SECRET_KEY = env("SECRET_KEY", str, "forge-local-cli")

DEBUG = env("DEBUG", bool, False)

ALLOWED_HOSTS = env("ALLOWED_HOSTS", list, [])


# Application definition

INSTALLED_APPS = [
    "geometry",
    "grounding",
    "spatial",
    "planning",
    "policy",
    "sim",
    "experiments",
    "records",
]

DATABASES = {}

USE_TZ = True

TIME_ZONE = env("TIME_ZONE", str, "UTC")


# Logging

LOG_LEVEL = env("LOG_LEVEL", str, "INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "plain",
            "stream": "ext://sys.stderr",
        },
    },
    "root": {"handlers": ["console"], "level": LOG_LEVEL},
}


# Sentry configuration

sentry_sdk.init(
    dsn=env("SENTRY_DSN", str, None),
    integrations=[DjangoIntegration(), LoggingIntegration()],
    traces_sample_rate=0.0,
    send_default_pii=False,
)


# Forge runtime

FORGE_VERSION = "0.1.0"

FORGE_SEED = env("FORGE_SEED", int, 0)

FORGE_JOBS = env("FORGE_JOBS", int, 1)


# Caption providers, planning agents and environments

CAPTION_PROVIDERS = {
    "template": {
        "class": "grounding.providers.template.TemplateCaptionProvider",
        "settings": {"fallback": "object"},
    },
}

PLANNING_AGENTS = {
    "expert": {
        "class": "planning.agents.expert.ScriptedExpert",
        "settings": {},
    },
    "random": {
        "class": "planning.agents.random.EpsilonRandomAgent",
        "settings": {"epsilon": env("FORGE_RANDOM_EPSILON", float, 0.5)},
    },
}

PLANNING_ENVIRONMENTS = {
    "toy": {
        "class": "planning.environments.kitchen.ToyKitchen",
        "settings": {},
    },
}


# Domain defaults

GROUNDING = {
    "threshold": 0.9,
    "mix": "box:0.4,point:0.4,text:0.2",
    "quality_mode": "exclude",
    "low_quality_weight": 0.25,
    "point_mode": "uniform",
}

SPATIAL = {
    "per_scene": 6,
    "multiple_choice": False,
}

FLOW_POLICY = {
    "lr": 5e-5,
    "beta1": 0.9,
    "beta2": 0.999,
    "eps": 1e-8,
    "weight_decay": 0.0,
    "batch_size": 64,
    "steps": 2000,
    "horizon": 4,
    "execute": 2,
    "integration_steps": 10,
    "torch_threads": env("FORGE_TORCH_THREADS", int, 1),
}

SIM = {
    "tasks_file": BASE_DIR / "sim" / "tasks.cfg",
    "eval_episodes": 240,
    "demo_episodes": 500,
}

EXPERIMENT = {
    "threshold": 0.8,
    "eval_every": 500,
    "eval_episodes": 50,
}
