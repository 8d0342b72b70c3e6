from django.urls import path
from . import views

urlpatterns = [
    path("api/health/", views.health),
    path("api/classify/", views.classify_matrix),
    path("api/fig8/classify/", views.fig8_classify),
    path("api/slope/change/", views.slope_change),
]
