"""Unit tests for the Web Crawler and News API Integration.""" 