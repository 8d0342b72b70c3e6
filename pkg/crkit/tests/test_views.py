import json

from django.test import SimpleTestCase

from crkit.export import matrix_to_json
from crkit.geometry.isometry import e_abg, t_lambda


class ApiTests(SimpleTestCase):
    def post(self, url, payload):
        body = payload if isinstance(payload, str) else json.dumps(payload)
        return self.client.post(url, data=body, content_type="application/json")

    def test_health(self):
        r = self.client.get("/api/health/")
        self.assertEqual(r.status_code, 200)
        self.assertEqual(r.json(), {"ok": True})
        self.assertEqual(self.client.post("/api/health/").status_code, 405)

    def test_classify(self):
        r = self.post("/api/classify/", {"matrix": matrix_to_json(e_abg(0.3, 0.7))})
        self.assertEqual(r.status_code, 200)
        body = r.json()
        self.assertEqual(body["kind"], "RegularElliptic")
        self.assertEqual(body["model"], "ball")
        self.assertIn("elliptic_type", body)

    def test_classify_in_siegel(self):
        r = self.post("/api/classify/", {"matrix": matrix_to_json(t_lambda(2)), "model": "siegel"})
        self.assertEqual(r.json()["kind"], "Loxodromic")

    def test_classify_errors(self):
        self.assertEqual(self.client.get("/api/classify/").status_code, 405)
        r = self.post("/api/classify/", "{not json")
        self.assertEqual((r.status_code, r.json()), (400, {"error": "Invalid JSON"}))
        r = self.post("/api/classify/", {})
        self.assertEqual((r.status_code, r.json()), (400, {"error": "Missing matrix"}))

        r = self.post("/api/classify/", {"matrix": matrix_to_json(t_lambda(2))})
        self.assertEqual(r.status_code, 422)
        self.assertEqual(r.json()["error"], "NotInGroup")
        self.assertEqual(r.json()["module"], "isometry")

        r = self.post("/api/classify/", {"matrix": [[1, 0], [0, 1]]})
        self.assertEqual(r.status_code, 422)
        self.assertEqual(r.json()["error"], "InvalidArgument")

    def test_fig8_classify(self):
        r = self.post("/api/fig8/classify/", {"p": 3, "n": 23})
        self.assertEqual(r.status_code, 200)
        body = r.json()
        self.assertEqual(body["outcome"]["slope"], [23, -3])
        self.assertEqual(body["transported"]["slope"], [3, 14])

        r = self.post("/api/fig8/classify/", {"u": [3.05, 0]})
        self.assertEqual(r.json()["class"]["kind"], "Loxodromic")

    def test_fig8_errors(self):
        r = self.post("/api/fig8/classify/", {})
        self.assertEqual((r.status_code, r.json()), (400, {"error": "Missing u or p, n"}))
        r = self.post("/api/fig8/classify/", {"p": "three", "n": 23})
        self.assertEqual((r.status_code, r.json()), (400, {"error": "Invalid parameters"}))
        r = self.post("/api/fig8/classify/", {"u": 5})
        self.assertEqual(r.status_code, 422)
        self.assertEqual(r.json()["error"], "NegativeDelta")

    def test_slope_change(self):
        r = self.post("/api/slope/change/", {"slope": [0, 1]})
        self.assertEqual(r.json(), {"slope": [-1, 3], "marking": "(l0,m0)"})
        r = self.post("/api/slope/change/", {"slope": [-1, 3], "from": "(l0,m0)", "to": "(l,m)"})
        self.assertEqual(r.json(), {"slope": [0, 1], "marking": "(l,m)"})

    def test_slope_errors(self):
        r = self.post("/api/slope/change/", {"slope": [1]})
        self.assertEqual((r.status_code, r.json()), (400, {"error": "Missing slope"}))
        r = self.post("/api/slope/change/", {"slope": ["a", 1]})
        self.assertEqual((r.status_code, r.json()), (400, {"error": "Invalid slope"}))
        r = self.post("/api/slope/change/", {"slope": [2, 4]})
        self.assertEqual(r.status_code, 422)
        self.assertEqual(r.json()["error"], "InvalidSlope")
