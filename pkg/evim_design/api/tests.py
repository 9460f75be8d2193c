from django.contrib.auth.models import User
from django.urls import reverse
from rest_framework import status
from rest_framework.test import APITestCase

from motor.tests.fixtures import REFERENCE_VALUES

PASSWORD = "motor-pass-123"


class LoginTests(APITestCase):
    def setUp(self):
        self.user = User.objects.create_user(
            "ana", email="ana@example.com", password=PASSWORD
        )

    def test_login_returns_token_pair(self):
        response = self.client.post(
            reverse("login"), {"username": "ana", "password": PASSWORD}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data["message"], "Login successful.")
        self.assertEqual(response.data["username"], "ana")
        self.assertEqual(response.data["user_id"], self.user.id)
        self.assertIn("access", response.data)

        refreshed = self.client.post(
            reverse("token_refresh"), {"refresh": response.data["refresh"]}, format="json"
        )
        self.assertEqual(refreshed.status_code, status.HTTP_200_OK)
        self.assertIn("access", refreshed.data)

    def test_wrong_password(self):
        response = self.client.post(
            reverse("login"), {"username": "ana", "password": "nope"}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_401_UNAUTHORIZED)
        self.assertEqual(response.data["detail"], "Invalid username or password.")
        self.assertTrue(response.data["error"])


class MotorAPITestCase(APITestCase):
    def setUp(self):
        self.user = User.objects.create_user("ana", password=PASSWORD)
        response = self.client.post(
            reverse("login"), {"username": "ana", "password": PASSWORD}, format="json"
        )
        self.client.credentials(HTTP_AUTHORIZATION=f"Bearer {response.data['access']}")


class EvaluateViewTests(MotorAPITestCase):
    def post(self, body):
        return self.client.post(reverse("evaluate"), body, format="json")

    def test_evaluates_design(self):
        response = self.post({"spec": {}, "design": REFERENCE_VALUES})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        data = response.data["data"]
        self.assertTrue(0 < data["efficiency"] < 1)
        self.assertEqual(data["winding"]["turns_per_phase"], 24)
        self.assertIn("constraints", data)

    def test_requires_authentication(self):
        self.client.credentials()
        response = self.post({"spec": {}, "design": REFERENCE_VALUES})
        self.assertEqual(response.status_code, status.HTTP_401_UNAUTHORIZED)
        self.assertTrue(response.data["error"])

    def test_unknown_field(self):
        response = self.post({"spec": {"colour": "red"}, "design": REFERENCE_VALUES})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(response.data["spec"]["colour"][0].code, "unknown_field")

    def test_out_of_range_design(self):
        response = self.post(
            {"spec": {}, "design": {**REFERENCE_VALUES, "airgap_flux_density": 1.5}}
        )
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn("design", response.data)

    def test_infeasible_design(self):
        response = self.post(
            {"spec": {}, "design": {**REFERENCE_VALUES, "stator_slot_width": 0.04}}
        )
        self.assertEqual(response.status_code, status.HTTP_422_UNPROCESSABLE_ENTITY)
        self.assertEqual(response.data["stage"], "geometry")
        self.assertEqual(response.data["cause"], "geometry_infeasible")
        self.assertTrue(response.data["error"])

    def test_unknown_route(self):
        response = self.client.get("/api/motors/")
        self.assertEqual(response.status_code, status.HTTP_404_NOT_FOUND)
        self.assertEqual(response.data["detail"], "The requested resource was not found.")


class OptimizeViewTests(MotorAPITestCase):
    def test_small_search(self):
        response = self.client.post(
            reverse("optimize"),
            {
                "spec": {},
                "hj": {
                    "max_evaluations": 20,
                    "min_step_fraction": 0.01,
                    "start_fractions": [0.5],
                },
            },
            format="json",
        )
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertIn(
            response.data["message"],
            ("Feasible design found.", "No feasible design found."),
        )
        self.assertLessEqual(response.data["data"]["evaluations"], 20)
        self.assertNotIn("trace", response.data["data"])

    def test_invalid_search_settings(self):
        response = self.client.post(
            reverse("optimize"),
            {"spec": {}, "hj": {"step_reduction": 3}},
            format="json",
        )
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
