from django.apps import AppConfig


class StudyAppConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "study"
    verbose_name = "Design comparison study"
