"""Тесты aielab."""
