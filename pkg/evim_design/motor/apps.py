from django.apps import AppConfig


class MotorConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "motor"
    verbose_name = "Induction motor design model"
