import torch
from django.apps import AppConfig
from django.conf import settings


class PolicyConfig(AppConfig):
    name = "policy"

    def ready(self):
        torch.set_num_threads(settings.FLOW_POLICY["torch_threads"])
        torch.use_deterministic_algorithms(True)
